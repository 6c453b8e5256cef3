use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not reach tolerance: estimate {estimate:e}, error bound {error_bound:e} \
         after {intervals} subintervals"
    )]
    Quadrature {
        estimate: f64,
        error_bound: f64,
        intervals: usize,
    },

    #[error("state is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("integration step size underflow at t = {t} (step {step:e}, {steps} steps taken)")]
    StepUnderflow { t: f64, step: f64, steps: u64 },

    #[error("integration exceeded {max_steps} steps at t = {t}")]
    StepBudget { t: f64, max_steps: u64 },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
