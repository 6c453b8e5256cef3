//! Landau–Zener excitation probabilities for linear quenches of the
//! transverse XY chain and the three-spin Ising chain, and the `β_n`
//! moments of those probabilities that determine every two-spin correlator
//! of the final state.
//!
//! All three protocols share the form `p_k = exp(-π τ g(k)²)` where the gap
//! function `g` vanishes at the critical modes:
//!
//! | protocol      | `g(k)`                 |
//! |---------------|------------------------|
//! | Ising         | `γ sin k`              |
//! | multicritical | `(1 + cos k) sin k`    |
//! | three-spin    | `sin k - J3 sin 2k`    |

use std::f64::consts::PI;
use std::fmt;

use crate::error::{domain, Result};
use crate::quadrature::{self, QuadratureOptions};

/// Relative tolerance used when callers do not supply one.
pub const DEFAULT_BETA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuenchKind {
    /// `h(t) = t/τ` across both Ising critical points at anisotropy `γ`.
    Ising,
    /// Linear path through the multicritical point, `h = 1 + |γ| sgn t`, `γ = -t/τ`.
    Multicritical,
    /// `h(t) = t/τ` for the Ising chain with a three-spin term `J3`.
    ThreeSpin,
}

impl fmt::Display for QuenchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuenchKind::Ising => "ising",
            QuenchKind::Multicritical => "multicritical",
            QuenchKind::ThreeSpin => "three-spin",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchProtocol {
    kind: QuenchKind,
    gamma: f64,
    j3: f64,
    tau: f64,
}

impl QuenchProtocol {
    pub fn ising(gamma: f64, tau: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return domain(format!("Ising quench needs 0 < gamma <= 1, got {gamma}"));
        }
        Self::checked(QuenchKind::Ising, gamma, 0.0, tau)
    }

    pub fn multicritical(tau: f64) -> Result<Self> {
        Self::checked(QuenchKind::Multicritical, 0.0, 0.0, tau)
    }

    pub fn three_spin(j3: f64, tau: f64) -> Result<Self> {
        if !(j3 >= 0.0 && j3.is_finite()) {
            return domain(format!("three-spin quench needs j3 >= 0, got {j3}"));
        }
        Self::checked(QuenchKind::ThreeSpin, 0.0, j3, tau)
    }

    // τ = 0 is accepted and treated as the sudden limit.
    fn checked(kind: QuenchKind, gamma: f64, j3: f64, tau: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return domain(format!("tau must be finite and non-negative, got {tau}"));
        }
        Ok(Self {
            kind,
            gamma,
            j3,
            tau,
        })
    }

    pub fn kind(&self) -> QuenchKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn j3(&self) -> f64 {
        self.j3
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Same protocol at a different quench time.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::checked(self.kind, self.gamma, self.j3, tau)
    }

    /// Gap function `g(k)` whose square sets the Landau–Zener exponent.
    pub fn gap_function(&self, k: f64) -> f64 {
        match self.kind {
            QuenchKind::Ising => self.gamma * k.sin(),
            QuenchKind::Multicritical => (1.0 + k.cos()) * k.sin(),
            QuenchKind::ThreeSpin => k.sin() - self.j3 * (2.0 * k).sin(),
        }
    }

    /// Zeros of the gap function on `[0, π]`.
    pub fn critical_modes(&self) -> Vec<f64> {
        let mut zeros = vec![0.0, PI];
        if self.kind == QuenchKind::ThreeSpin && self.j3 > 0.5 {
            zeros.push((0.5 / self.j3).acos());
        }
        zeros.sort_by(f64::total_cmp);
        zeros
    }

    fn probability_unchecked(&self, k: f64) -> f64 {
        let g = self.gap_function(k);
        (-PI * self.tau * g * g).exp()
    }

    /// Landau–Zener excitation probability `p_k` of mode `k ∈ [0, π]`.
    pub fn excitation_probability(&self, k: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&k) {
            return domain(format!("wavenumber {k} outside [0, pi]"));
        }
        Ok(self.probability_unchecked(k))
    }

    /// Breakpoints that isolate the Gaussian peaks of `p_k` around each
    /// critical mode. The local width is found by bisection on
    /// `π τ g(k)² = 1` moving away from the zero.
    fn peak_breakpoints(&self) -> Vec<f64> {
        let zeros = self.critical_modes();
        let mut points = zeros.clone();
        if self.tau <= 1.0 {
            return points;
        }
        for (i, &z) in zeros.iter().enumerate() {
            let left = if i > 0 { zeros[i - 1] } else { z };
            let right = zeros.get(i + 1).copied().unwrap_or(z);
            for (dir, reach) in [(-1.0, z - left), (1.0, right - z)] {
                let reach = 0.5 * reach;
                if reach <= 0.0 {
                    continue;
                }
                let exponent = |d: f64| PI * self.tau * self.gap_function(z + dir * d).powi(2);
                if exponent(reach) < 1.0 {
                    continue;
                }
                let (mut lo, mut hi) = (0.0, reach);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if exponent(mid) < 1.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let width = hi;
                for m in [1.0, 3.0, 8.0, 20.0] {
                    let d = m * width;
                    if d < reach {
                        points.push(z + dir * d);
                    }
                }
            }
        }
        points
    }
}

/// `β_n = (1/π) ∫₀^π p_k cos(nk) dk`, computed by adaptive quadrature to
/// relative tolerance `tol`. For `n > 0` the error is also allowed to reach
/// `tol` times `(1/π)∫|p_k cos(nk)| dk ≤ β_0`, since the oscillating
/// integrand may cancel to far below the scale of `β_0`.
///
/// Odd `n` is accepted; it only vanishes for protocols whose `p_k` is
/// symmetric under `k → π - k`.
pub fn beta_n(protocol: &QuenchProtocol, n: u32, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    if protocol.tau == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let opts = QuadratureOptions {
        rel_tol: tol,
        l1_tol: if n == 0 { 0.0 } else { tol },
        ..Default::default()
    };
    let nf = f64::from(n);
    let integral = quadrature::integrate(
        |k| protocol.probability_unchecked(k) * (nf * k).cos(),
        0.0,
        PI,
        &protocol.peak_breakpoints(),
        &opts,
    )?;
    Ok(integral.value / PI)
}

/// Density of excited modes after the quench, `β_0`.
pub fn defect_density(protocol: &QuenchProtocol) -> Result<f64> {
    beta_n(protocol, 0, DEFAULT_BETA_TOL)
}

/// `β_n` for every even `n` up to `n_max`, computed once per protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSet {
    n_max: u32,
    values: Vec<f64>,
}

impl BetaSet {
    pub fn compute(protocol: &QuenchProtocol, n_max: u32, tol: f64) -> Result<Self> {
        if n_max % 2 != 0 {
            return domain(format!("n_max must be even, got {n_max}"));
        }
        let values = (0..=n_max)
            .step_by(2)
            .map(|n| beta_n(protocol, n, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_max, values })
    }

    /// Builds a set from externally supplied `[β_0, β_2, ...]`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return domain("beta set needs at least beta_0");
        }
        let b0 = values[0];
        if !(0.0..=1.0).contains(&b0) {
            return domain(format!("beta_0 = {b0} outside [0, 1]"));
        }
        if let Some(b) = values.iter().find(|b| b.abs() > b0 + 1e-12) {
            return domain(format!("|beta_n| = {} exceeds beta_0 = {b0}", b.abs()));
        }
        Ok(Self {
            n_max: 2 * (values.len() as u32 - 1),
            values,
        })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// `β_n` for even `n ≤ n_max`.
    pub fn get(&self, n: u32) -> Option<f64> {
        if n % 2 != 0 {
            return None;
        }
        self.values.get((n / 2) as usize).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
