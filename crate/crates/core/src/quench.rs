//! Final-state two-spin correlators after a quench, and the correlation
//! measures of the resulting two-spin X state.
//!
//! `c4 = 1 - 2β_0` and `c3 = c4² - 4β_n²` hold for every even separation;
//! the transverse correlator `c1 = c2` is only available in closed form for
//! `n ∈ {2, 4, 6}`.

use crate::error::{domain, Result};
use crate::kernels::{BetaSet, QuenchProtocol, DEFAULT_BETA_TOL};
use crate::xstate::{
    correlation_report, CorrelationReport, CorrelatorSet, MeasurementFamily, XStateDensityMatrix,
};

/// Negative eigenvalues down to this size are attributed to quadrature
/// error and clamped.
pub const QUENCH_PSD_TOLERANCE: f64 = 1e-10;

pub const SUPPORTED_SEPARATIONS: [u32; 3] = [2, 4, 6];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchMeasureRequest {
    pub protocol: QuenchProtocol,
    pub separation: u32,
}

impl QuenchMeasureRequest {
    pub fn new(protocol: QuenchProtocol, separation: u32) -> Result<Self> {
        check_separation(separation)?;
        Ok(Self {
            protocol,
            separation,
        })
    }
}

fn check_separation(n: u32) -> Result<()> {
    if SUPPORTED_SEPARATIONS.contains(&n) {
        Ok(())
    } else {
        domain(format!("separation n = {n} not in {{2, 4, 6}}"))
    }
}

/// All `β_n` needed for `n ≤ 6`.
pub fn quench_betas(protocol: &QuenchProtocol) -> Result<BetaSet> {
    BetaSet::compute(protocol, 6, DEFAULT_BETA_TOL)
}

/// Correlators at separation `n` from precomputed `β`s.
pub fn correlators_from_betas(betas: &BetaSet, n: u32) -> Result<CorrelatorSet> {
    check_separation(n)?;
    let beta = |m: u32| {
        betas
            .get(m)
            .ok_or_else(|| crate::Error::Domain(format!("beta_{m} missing from beta set")))
    };
    let b0 = beta(0)?;
    let b2 = beta(2)?;
    let m = 1.0 - 2.0 * b0;
    let bn = beta(n)?;
    let c4 = m;
    let c3 = m * m - 4.0 * bn * bn;
    let c1 = match n {
        2 => 0.5 * b2 * m,
        4 => {
            let b4 = beta(4)?;
            m * m * b2 * b2 - 4.0 * b2.powi(4) + 0.5 * b4 * m.powi(3) - 2.0 * b2 * b2 * b4 * m
        }
        _ => {
            let b4 = beta(4)?;
            let b6 = beta(6)?;
            let first = b6 * (m * m - 4.0 * b2 * b2) + 4.0 * b2 * (b2 * b2 + b4 * b4 - b4 * m);
            let second = 16.0 * b2 * b2 * b4 + m * (m * m - 8.0 * b2 * b2 - 4.0 * b4 * b4);
            0.5 * first * second
        }
    };
    CorrelatorSet::new(c1, c1, c3, c4)
}

pub fn correlators(protocol: &QuenchProtocol, n: u32) -> Result<CorrelatorSet> {
    check_separation(n)?;
    correlators_from_betas(&quench_betas(protocol)?, n)
}

pub fn state_from_betas(betas: &BetaSet, n: u32) -> Result<XStateDensityMatrix> {
    let c = correlators_from_betas(betas, n)?;
    XStateDensityMatrix::from_correlators_with_tolerance(&c, QUENCH_PSD_TOLERANCE)
}

pub fn measures_from_betas(betas: &BetaSet, n: u32, family: MeasurementFamily) -> Result<CorrelationReport> {
    Ok(correlation_report(&state_from_betas(betas, n)?, family))
}

/// Correlation measures of spins `n` sites apart after the quench.
pub fn measures(protocol: &QuenchProtocol, n: u32, family: MeasurementFamily) -> Result<CorrelationReport> {
    check_separation(n)?;
    measures_from_betas(&quench_betas(protocol)?, n, family)
}

fn xlog2x(x: f64) -> Result<f64> {
    if x < -1e-14 {
        domain(format!("logarithm of negative argument {x}"))
    } else if x <= 0.0 {
        Ok(0.0)
    } else {
        Ok(x * x.log2())
    }
}

fn check_pair(b0: f64, b2: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&b0) || b2.abs() > b0 + 1e-14 || !b2.is_finite() {
        return domain(format!("invalid beta pair (beta0 = {b0}, beta2 = {b2})"));
    }
    Ok(())
}

/// Closed-form mutual information of the `n = 2` state in terms of `β_0, β_2`.
pub fn closed_form_i_n2(b0: f64, b2: f64) -> Result<f64> {
    check_pair(b0, b2)?;
    let q = 1.0 - b0;
    let cross = 4.0 * b0 * q + 4.0 * b2 * b2;
    let skew = b2 * (1.0 - 2.0 * b0);
    Ok(-2.0 * xlog2x(q)?
        + xlog2x(q * q - b2 * b2)?
        - 2.0 * xlog2x(b0)?
        + xlog2x(b0 * b0 - b2 * b2)?
        + xlog2x(0.25 * (cross + skew))?
        + xlog2x(0.25 * (cross - skew))?)
}

/// Closed-form classical correlation of the `n = 2` state. It is the
/// information gained by a measurement in the xy plane, where both outcomes
/// leave A with Bloch length `(1 - 2β_0)√(1 + β_2²/4)`.
pub fn closed_form_c_n2(b0: f64, b2: f64) -> Result<f64> {
    check_pair(b0, b2)?;
    let r = (1.0 - 2.0 * b0) * (1.0 + 0.25 * b2 * b2).sqrt();
    Ok(-xlog2x(1.0 - b0)? - xlog2x(b0)? + xlog2x(0.5 * (1.0 - r))? + xlog2x(0.5 * (1.0 + r))?)
}
