//! Two central qubits in a Werner state, coupled to a transverse XY chain
//! whose field is swept as `h(t) = 1 - t/τ`.
//!
//! The coupling `δ/2 (S_z^A + S_z^B) Σ σ_z^i` splits the environment into
//! two branches evolving with fields `h(t) ± δ`. Each branch factorises into
//! independent `(k, -k)` modes with Hamiltonian
//! `H_k^± = 2[(h ± δ + cos k) σz + γ sin k σx]` in the basis
//! `|0⟩, |k, -k⟩`. The decoherence factor is the squared overlap of the two
//! branch states, `D(t) = Π_k |u_k⁺* u_k⁻ + v_k⁺* v_k⁻|²`.
//!
//! Time is measured so that the first Ising point `h = 1` is crossed at
//! `t = 0`; evolution starts from the instantaneous ground state at
//! `t_start = -τ (h_start - 1)`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::Vector2;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::error::{domain, Error, Result};
use crate::ode::{DormandPrince, State2, Tolerances};
use crate::xstate::{concurrence_xstate, discord, XStateDensityMatrix};

pub const DEFAULT_H_START: f64 = 10.0;

/// Per-step norm drift above which the mode state is renormalised.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CentralConfig {
    n_spins: usize,
    delta: f64,
    tau: f64,
    gamma: f64,
    a: f64,
    h_start: f64,
    t_grid: Vec<f64>,
}

impl CentralConfig {
    /// `h_start - 1` must be at least ten times `max(δ, 1/√τ)` so that the
    /// starting ground state is far from every avoided crossing.
    pub fn new(
        n_spins: usize,
        delta: f64,
        tau: f64,
        gamma: f64,
        a: f64,
        h_start: f64,
        t_grid: Vec<f64>,
    ) -> Result<Self> {
        if n_spins < 2 || n_spins % 2 != 0 {
            return domain(format!("number of environment spins must be even and >= 2, got {n_spins}"));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return domain(format!("coupling delta must be >= 0, got {delta}"));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return domain(format!("tau must be > 0, got {tau}"));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return domain(format!("gamma must lie in (0, 1], got {gamma}"));
        }
        if !(0.0..=1.0).contains(&a) {
            return domain(format!("Werner weight a must lie in [0, 1], got {a}"));
        }
        let margin = 10.0 * delta.max(1.0 / tau.sqrt());
        if !(h_start - 1.0 >= margin) || !h_start.is_finite() {
            return domain(format!(
                "h_start = {h_start} too close to the critical point (need h_start - 1 >= {margin})"
            ));
        }
        let t_start = tau * (1.0 - h_start);
        if t_grid.iter().any(|t| !t.is_finite() || *t < t_start) {
            return domain(format!("observation times must be finite and >= t_start = {t_start}"));
        }
        if t_grid.windows(2).any(|w| w[1] < w[0]) {
            return domain("observation times must be ordered");
        }
        Ok(Self {
            n_spins,
            delta,
            tau,
            gamma,
            a,
            h_start,
            t_grid,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn h_start(&self) -> f64 {
        self.h_start
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn field(&self, t: f64) -> f64 {
        1.0 - t / self.tau
    }

    pub fn time_of_field(&self, h: f64) -> f64 {
        self.tau * (1.0 - h)
    }

    pub fn t_start(&self) -> f64 {
        self.time_of_field(self.h_start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Antiperiodic-sector momenta `(2m - 1)π/N`, `m = 1..N/2`.
pub fn mode_momenta(n_spins: usize) -> Result<Vec<f64>> {
    if n_spins == 0 || n_spins % 2 != 0 {
        return domain(format!("mode momenta need an even, positive N, got {n_spins}"));
    }
    let n = n_spins as f64;
    Ok((1..=n_spins / 2).map(|m| (2 * m - 1) as f64 * PI / n).collect())
}

/// `[[z, x], [x, -z]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeHamiltonian {
    pub z: f64,
    pub x: f64,
}

impl ModeHamiltonian {
    pub fn matrix(&self) -> nalgebra::Matrix2<Complex64> {
        nalgebra::Matrix2::new(
            Complex64::new(self.z, 0.0),
            Complex64::new(self.x, 0.0),
            Complex64::new(self.x, 0.0),
            Complex64::new(-self.z, 0.0),
        )
    }

    pub fn gap(&self) -> f64 {
        2.0 * self.z.hypot(self.x)
    }

    /// Normalised eigenvector of the lower level with `u ≥ 0` real (or
    /// `v > 0` real when `u` vanishes).
    pub fn ground_state(&self) -> ModeState {
        let e = self.z.hypot(self.x);
        if e == 0.0 {
            return ModeState::new(Complex64::new(1.0, 0.0), Complex64::default());
        }
        let (u, v) = if self.z >= 0.0 {
            (-self.x, self.z + e)
        } else {
            (e - self.z, -self.x)
        };
        let norm = u.hypot(v);
        let (mut u, mut v) = (u / norm, v / norm);
        if u < 0.0 || (u == 0.0 && v < 0.0) {
            u = -u;
            v = -v;
        }
        ModeState::new(Complex64::new(u, 0.0), Complex64::new(v, 0.0))
    }

    /// Population of the upper level.
    pub fn excited_population(&self, state: &ModeState) -> f64 {
        let g = self.ground_state();
        let (g0, g1) = (g.u.re, g.v.re);
        (state.u * (-g1) + state.v * g0).norm_sqr()
    }
}

/// `H_k^±(t) = 2[(h(t) ± δ + cos k) σz + γ sin k σx]`.
pub fn branch_hamiltonian(k: f64, t: f64, branch: Branch, config: &CentralConfig) -> ModeHamiltonian {
    ModeHamiltonian {
        z: 2.0 * (config.field(t) + branch.sign() * config.delta + k.cos()),
        x: 2.0 * config.gamma * k.sin(),
    }
}

/// Amplitudes of `|0⟩` and `|k, -k⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub u: Complex64,
    pub v: Complex64,
}

impl ModeState {
    pub fn new(u: Complex64, v: Complex64) -> Self {
        Self { u, v }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u.norm_sqr() + self.v.norm_sqr()
    }

    pub fn overlap(&self, other: &ModeState) -> Complex64 {
        self.u.conj() * other.u + self.v.conj() * other.v
    }

    pub fn as_vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.u, self.v)
    }
}

/// Ground state of `H_k^±` at the start of the sweep.
pub fn initial_mode_state(k: f64, branch: Branch, config: &CentralConfig) -> ModeState {
    branch_hamiltonian(k, config.t_start(), branch, config).ground_state()
}

/// Incrementally evolved trajectory of one `(k, branch)` mode.
#[derive(Debug, Clone)]
pub struct ModeEvolver {
    k: f64,
    z_offset: f64,
    inv_tau: f64,
    x: f64,
    integrator: DormandPrince,
    renormalizations: u64,
    max_step_drift: f64,
}

impl ModeEvolver {
    /// Starts the mode from `state` at time `t0`.
    pub fn new(k: f64, branch: Branch, config: &CentralConfig, t0: f64, state: ModeState) -> Self {
        let ham = branch_hamiltonian(k, t0, branch, config);
        let h0 = 0.05 / ham.gap().max(1.0);
        Self {
            k,
            z_offset: 2.0 * (1.0 + branch.sign() * config.delta + k.cos()),
            inv_tau: 2.0 / config.tau,
            x: ham.x,
            integrator: DormandPrince::new(t0, [state.u, state.v], h0, Tolerances::default()),
            renormalizations: 0,
            max_step_drift: 0.0,
        }
    }

    /// Starts the mode in its ground state at `config.t_start()`.
    pub fn from_ground_state(k: f64, branch: Branch, config: &CentralConfig) -> Self {
        Self::new(k, branch, config, config.t_start(), initial_mode_state(k, branch, config))
    }

    pub fn momentum(&self) -> f64 {
        self.k
    }

    pub fn time(&self) -> f64 {
        self.integrator.t()
    }

    pub fn state(&self) -> ModeState {
        let [u, v] = self.integrator.state();
        ModeState::new(u, v)
    }

    pub fn renormalizations(&self) -> u64 {
        self.renormalizations
    }

    /// Largest norm deviation seen after a single step, before any
    /// renormalisation.
    pub fn max_step_drift(&self) -> f64 {
        self.max_step_drift
    }

    pub fn accepted_steps(&self) -> u64 {
        self.integrator.accepted_steps()
    }

    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        let (z0, rate, x) = (self.z_offset, self.inv_tau, self.x);
        let rhs = move |time: f64, y: &State2| -> State2 {
            let z = z0 - rate * time;
            let minus_i = Complex64::new(0.0, -1.0);
            [
                (y[0] * z + y[1] * x) * minus_i,
                (y[0] * x - y[1] * z) * minus_i,
            ]
        };
        let mut renorm = 0u64;
        let mut worst = self.max_step_drift;
        let k = self.k;
        self.integrator.advance(rhs, t, |y| {
            let norm = y[0].norm_sqr() + y[1].norm_sqr();
            let drift = (norm - 1.0).abs();
            worst = worst.max(drift);
            if drift > RENORMALIZE_THRESHOLD {
                let s = norm.sqrt().recip();
                y[0] *= s;
                y[1] *= s;
                renorm += 1;
                log::trace!("renormalised mode k = {k} (drift {drift:e})");
            }
        })?;
        self.renormalizations += renorm;
        self.max_step_drift = worst;
        Ok(())
    }
}

/// Evolves `state` of mode `k` on `branch` from `t_from` to `t_to`.
pub fn evolve_mode(
    k: f64,
    branch: Branch,
    config: &CentralConfig,
    t_from: f64,
    t_to: f64,
    state: ModeState,
) -> Result<ModeState> {
    let mut evolver = ModeEvolver::new(k, branch, config, t_from, state);
    evolver.advance_to(t_to)?;
    Ok(evolver.state())
}

/// `F_k = |⟨ψ_k⁺|ψ_k⁻⟩|²`, with both states normalised first so that
/// integrator norm drift does not leak into `D`.
pub fn mode_fidelity(plus: &ModeState, minus: &ModeState) -> f64 {
    let norms = plus.norm_sqr() * minus.norm_sqr();
    if norms == 0.0 {
        return 0.0;
    }
    (plus.overlap(minus).norm_sqr() / norms).clamp(0.0, 1.0)
}

/// Product of mode fidelities, accumulated in log space.
pub fn decoherence_from_fidelities<I: IntoIterator<Item = f64>>(fidelities: I) -> f64 {
    let mut log_d = 0.0;
    for f in fidelities {
        if f <= 0.0 {
            return 0.0;
        }
        log_d += f.ln();
    }
    log_d.exp().clamp(0.0, 1.0)
}

/// Both branches of every mode, advanced together.
#[derive(Debug, Clone)]
pub struct Environment {
    plus: Vec<ModeEvolver>,
    // Absent when δ = 0: both branches coincide.
    minus: Option<Vec<ModeEvolver>>,
}

impl Environment {
    pub fn new(config: &CentralConfig) -> Result<Self> {
        let momenta = mode_momenta(config.n_spins)?;
        let start = |branch| {
            momenta
                .iter()
                .map(|&k| ModeEvolver::from_ground_state(k, branch, config))
                .collect::<Vec<_>>()
        };
        Ok(Self {
            plus: start(Branch::Plus),
            minus: (config.delta != 0.0).then(|| start(Branch::Minus)),
        })
    }

    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        self.plus.par_iter_mut().try_for_each(|m| m.advance_to(t))?;
        if let Some(minus) = self.minus.as_mut() {
            minus.par_iter_mut().try_for_each(|m| m.advance_to(t))?;
        }
        Ok(())
    }

    pub fn mode_fidelities(&self) -> Vec<f64> {
        match &self.minus {
            Some(minus) => self
                .plus
                .iter()
                .zip(minus)
                .map(|(p, m)| mode_fidelity(&p.state(), &m.state()))
                .collect(),
            None => self
                .plus
                .iter()
                .map(|p| {
                    let s = p.state();
                    mode_fidelity(&s, &s)
                })
                .collect(),
        }
    }

    pub fn decoherence_factor(&self) -> f64 {
        decoherence_from_fidelities(self.mode_fidelities())
    }

    pub fn modes(&self, branch: Branch) -> &[ModeEvolver] {
        match (branch, &self.minus) {
            (Branch::Minus, Some(minus)) => minus,
            _ => &self.plus,
        }
    }

    pub fn max_step_drift(&self) -> f64 {
        self.plus
            .iter()
            .chain(self.minus.iter().flatten())
            .map(ModeEvolver::max_step_drift)
            .fold(0.0, f64::max)
    }

    pub fn max_norm_error(&self) -> f64 {
        self.plus
            .iter()
            .chain(self.minus.iter().flatten())
            .map(|m| (m.state().norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `D(t)` from the exact mode-by-mode evolution.
pub fn decoherence_factor(config: &CentralConfig, t: f64) -> Result<f64> {
    let mut env = Environment::new(config)?;
    env.advance_to(t)?;
    Ok(env.decoherence_factor())
}

/// Approximate post-crossing fidelity of a mode at distance `q` from the
/// critical momentum: `1 - 4 sin²(4tδ)(e^{-2πτq²} - e^{-4πτq²})`.
pub fn approx_fk(q: f64, t: f64, delta: f64, tau: f64) -> f64 {
    let p = (-2.0 * PI * tau * q * q).exp();
    let s = (4.0 * t * delta).sin();
    (1.0 - 4.0 * s * s * (p - p * p)).clamp(0.0, 1.0)
}

/// Weak-coupling `D(t) ≈ exp(-8(√2-1) N δ² t² / (π√τ))`, valid after the
/// first crossing, with the adiabatic-mode fidelity factor taken as 1.
pub fn weak_coupling_d(t: f64, config: &CentralConfig) -> f64 {
    let n = config.n_spins as f64;
    let exponent = 8.0 * (SQRT_2 - 1.0) * n * config.delta.powi(2) * t * t / (PI * config.tau.sqrt());
    (-exponent).exp()
}

fn check_werner(a: f64, d: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&d) {
        return domain(format!("need 0 <= a <= 1 and 0 <= D <= 1, got a = {a}, D = {d}"));
    }
    Ok(())
}

/// Reduced state of the central qubits,
/// `¼[[1+a,0,0,2a√D],[0,1-a,0,0],[0,0,1-a,0],[2a√D,0,0,1+a]]`.
pub fn qubit_state(a: f64, d: f64) -> Result<XStateDensityMatrix> {
    check_werner(a, d)?;
    XStateDensityMatrix::new(
        0.25 * (1.0 + a),
        0.25 * (1.0 + a),
        0.25 * (1.0 - a),
        Complex64::new(0.5 * a * d.sqrt(), 0.0),
        Complex64::default(),
    )
}

/// `max[a(√D + ½) - ½, 0]`.
pub fn concurrence_werner(a: f64, d: f64) -> Result<f64> {
    check_werner(a, d)?;
    Ok((a * (d.sqrt() + 0.5) - 0.5).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceRow {
    pub t: f64,
    pub h: f64,
    pub decoherence: f64,
    pub discord: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecoherenceTrace {
    pub rows: Vec<DecoherenceRow>,
    /// Largest per-step norm drift over all mode trajectories.
    pub max_step_drift: f64,
}

/// Integration failure part-way through a trace.
#[derive(Debug, Clone, Error)]
#[error("trace aborted after {} rows: {source}", partial.rows.len())]
pub struct TraceError {
    pub partial: DecoherenceTrace,
    #[source]
    pub source: Error,
}

/// `D`, discord and concurrence of the central qubits at every time in the
/// configured grid. Discord is maximised over the full Bloch sphere.
pub fn trace_run(config: &CentralConfig) -> std::result::Result<DecoherenceTrace, TraceError> {
    let mut trace = DecoherenceTrace::default();
    let mut env = Environment::new(config).map_err(|source| TraceError {
        partial: DecoherenceTrace::default(),
        source,
    })?;
    for &t in &config.t_grid {
        if let Err(source) = env.advance_to(t) {
            trace.max_step_drift = env.max_step_drift();
            return Err(TraceError {
                partial: trace,
                source,
            });
        }
        let d = env.decoherence_factor();
        let row = qubit_state(config.a, d)
            .and_then(|rho| {
                Ok(DecoherenceRow {
                    t,
                    h: config.field(t),
                    decoherence: d,
                    discord: discord(&rho),
                    concurrence: concurrence_werner(config.a, d)?,
                })
            })
            .map_err(|source| TraceError {
                partial: trace.clone(),
                source,
            })?;
        debug_assert!((row.concurrence - concurrence_xstate(&qubit_state(config.a, d).unwrap())).abs() < 1e-12);
        trace.rows.push(row);
    }
    trace.max_step_drift = env.max_step_drift();
    Ok(trace)
}
