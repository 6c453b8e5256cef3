//! Two-qubit density matrices in X form and the correlation measures built
//! on them: von Neumann entropies, mutual information, measurement-optimised
//! classical correlation, discord, and concurrence.
//!
//! Basis ordering is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` with `↑` the `σz = +1` state.
//! Subsystem A is the first qubit, B the second; measurements act on B.
//! All entropies are in bits with `0·log₂0 = 0`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub type Matrix4c = Matrix4<Complex64>;
pub type Matrix2c = Matrix2<Complex64>;

/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are treated as zero.
pub const PSD_TOLERANCE: f64 = 1e-12;

/// Outcome probabilities below this leave the conditional state undefined.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-15;

const GRID_THETA: usize = 64;
const GRID_PHI: usize = 64;
const ANGLE_TOL: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two-spin correlators `⟨σxσx⟩, ⟨σyσy⟩, ⟨σzσz⟩, ⟨σz⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl CorrelatorSet {
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3), ("c4", c4)] {
            if !(v.is_finite() && v.abs() <= 1.0 + 1e-12) {
                return domain(format!("correlator {name} = {v} outside [-1, 1]"));
            }
        }
        Ok(Self { c1, c2, c3, c4 })
    }

    /// `λ0..λ3` of the corresponding X state, in the closed form
    /// `¼[(1+c3) ± √(4c4² + (c1-c2)²)]`, `¼[(1-c3) ± (c1+c2)]`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let root = (4.0 * self.c4 * self.c4 + (self.c1 - self.c2).powi(2)).sqrt();
        [
            0.25 * ((1.0 + self.c3) + root),
            0.25 * ((1.0 + self.c3) - root),
            0.25 * ((1.0 - self.c3) + (self.c1 + self.c2)),
            0.25 * ((1.0 - self.c3) - (self.c1 + self.c2)),
        ]
    }
}

/// Anything that can be analysed as a two-qubit state.
pub trait TwoQubitState {
    fn matrix(&self) -> Matrix4c;
    fn eigenvalues(&self) -> [f64; 4];
    fn bloch(&self) -> BlochForm {
        BlochForm::from_matrix(&self.matrix())
    }
}

/// X-shaped two-qubit density matrix
///
/// ```text
/// [ a+   0    0    b1 ]
/// [ 0    a0   b2   0  ]
/// [ 0    b2*  a0   0  ]
/// [ b1*  0    0    a- ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateDensityMatrix {
    a_plus: f64,
    a_minus: f64,
    a_zero: f64,
    b1: Complex64,
    b2: Complex64,
}

impl XStateDensityMatrix {
    pub fn new(a_plus: f64, a_minus: f64, a_zero: f64, b1: Complex64, b2: Complex64) -> Result<Self> {
        Self::with_tolerance(a_plus, a_minus, a_zero, b1, b2, PSD_TOLERANCE)
    }

    /// As [`XStateDensityMatrix::new`] but accepting eigenvalues down to `-tol`.
    pub fn with_tolerance(
        a_plus: f64,
        a_minus: f64,
        a_zero: f64,
        b1: Complex64,
        b2: Complex64,
        tol: f64,
    ) -> Result<Self> {
        let all = [a_plus, a_minus, a_zero, b1.re, b1.im, b2.re, b2.im];
        if all.iter().any(|v| !v.is_finite()) {
            return domain("non-finite matrix element");
        }
        let trace = a_plus + a_minus + 2.0 * a_zero;
        if (trace - 1.0).abs() > 1e-12 {
            return domain(format!("trace {trace} differs from 1"));
        }
        let rho = Self {
            a_plus,
            a_minus,
            a_zero,
            b1,
            b2,
        };
        let min = rho
            .eigenvalues()
            .into_iter()
            .chain([a_plus, a_minus, a_zero])
            .fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(rho)
    }

    /// Density matrix `¼(1 + c1 XX + c2 YY + c3 ZZ + c4 (1Z + Z1))`.
    pub fn from_correlators(c: &CorrelatorSet) -> Result<Self> {
        Self::from_correlators_with_tolerance(c, PSD_TOLERANCE)
    }

    pub fn from_correlators_with_tolerance(cs: &CorrelatorSet, tol: f64) -> Result<Self> {
        Self::with_tolerance(
            0.25 * (1.0 + cs.c3 + 2.0 * cs.c4),
            0.25 * (1.0 + cs.c3 - 2.0 * cs.c4),
            0.25 * (1.0 - cs.c3),
            c(0.25 * (cs.c1 - cs.c2), 0.0),
            c(0.25 * (cs.c1 + cs.c2), 0.0),
            tol,
        )
    }

    pub fn a_plus(&self) -> f64 {
        self.a_plus
    }

    pub fn a_minus(&self) -> f64 {
        self.a_minus
    }

    pub fn a_zero(&self) -> f64 {
        self.a_zero
    }

    pub fn b1(&self) -> Complex64 {
        self.b1
    }

    pub fn b2(&self) -> Complex64 {
        self.b2
    }

    /// Eigenvalues sorted in decreasing order.
    pub fn eigenvalues_sorted(&self) -> [f64; 4] {
        let mut e = TwoQubitState::eigenvalues(self);
        e.sort_by(|a, b| b.total_cmp(a));
        e
    }

    /// Same populations with both coherences multiplied by `s`.
    pub fn scale_coherences(&self, s: f64) -> Result<Self> {
        Self::new(self.a_plus, self.a_minus, self.a_zero, self.b1 * s, self.b2 * s)
    }
}

impl TwoQubitState for XStateDensityMatrix {
    fn matrix(&self) -> Matrix4c {
        let z = Complex64::default();
        let mut m = Matrix4c::from_element(z);
        m[(0, 0)] = c(self.a_plus, 0.0);
        m[(1, 1)] = c(self.a_zero, 0.0);
        m[(2, 2)] = c(self.a_zero, 0.0);
        m[(3, 3)] = c(self.a_minus, 0.0);
        m[(0, 3)] = self.b1;
        m[(3, 0)] = self.b1.conj();
        m[(1, 2)] = self.b2;
        m[(2, 1)] = self.b2.conj();
        m
    }

    /// `λ0, λ1` from the outer block, `λ2, λ3` from the inner block.
    fn eigenvalues(&self) -> [f64; 4] {
        let mean = 0.5 * (self.a_plus + self.a_minus);
        let half_diff = 0.5 * (self.a_plus - self.a_minus);
        let root = (half_diff * half_diff + self.b1.norm_sqr()).sqrt();
        let b2 = self.b2.norm();
        [mean + root, mean - root, self.a_zero + b2, self.a_zero - b2]
    }

    fn bloch(&self) -> BlochForm {
        // Only the z polarisations and the xx, xy, yx, yy, zz correlations survive.
        let (p, q) = (self.b1, self.b2);
        let mut t = [[0.0; 3]; 3];
        t[0][0] = 2.0 * (p.re + q.re);
        t[1][1] = 2.0 * (q.re - p.re);
        t[0][1] = 2.0 * (q.im - p.im);
        t[1][0] = -2.0 * (p.im + q.im);
        t[2][2] = self.a_plus + self.a_minus - 2.0 * self.a_zero;
        let pol = self.a_plus - self.a_minus;
        BlochForm {
            a: [0.0, 0.0, pol],
            b: [0.0, 0.0, pol],
            t,
        }
    }
}

/// General validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix4c,
    eigenvalues: [f64; 4],
}

impl DensityMatrix {
    pub fn new(matrix: Matrix4c) -> Result<Self> {
        let herm_err = (matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > 1e-12 {
            return domain(format!("matrix is not Hermitian (deviation {herm_err:e})"));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return domain(format!("trace {trace} differs from 1"));
        }
        let eig = hermitian_eigenvalues(&matrix)?;
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOLERANCE {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(Self {
            matrix,
            eigenvalues: eig,
        })
    }

    /// `ρ_A ⊗ ρ_B` from two single-qubit Bloch vectors.
    pub fn product(a: [f64; 3], b: [f64; 3]) -> Result<Self> {
        let ra = qubit_from_bloch(a)?;
        let rb = qubit_from_bloch(b)?;
        Self::new(ra.kronecker(&rb))
    }
}

impl TwoQubitState for DensityMatrix {
    fn matrix(&self) -> Matrix4c {
        self.matrix
    }

    fn eigenvalues(&self) -> [f64; 4] {
        self.eigenvalues
    }
}

fn qubit_from_bloch(r: [f64; 3]) -> Result<Matrix2c> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if norm > 1.0 + 1e-12 {
        return domain(format!("Bloch vector length {norm} exceeds 1"));
    }
    Ok(Matrix2c::new(
        c(0.5 * (1.0 + r[2]), 0.0),
        c(0.5 * r[0], -0.5 * r[1]),
        c(0.5 * r[0], 0.5 * r[1]),
        c(0.5 * (1.0 - r[2]), 0.0),
    ))
}

fn hermitian_eigenvalues(m: &Matrix4c) -> Result<[f64; 4]> {
    let eig = SymmetricEigen::try_new(*m, 1e-15, 10_000).ok_or_else(|| {
        Error::Eigen(format!("Hermitian eigensolver did not converge for {m}"))
    })?;
    let mut out = [0.0; 4];
    out.copy_from_slice(eig.eigenvalues.as_slice());
    Ok(out)
}

fn pauli(i: usize) -> Matrix2c {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match i {
        0 => Matrix2c::new(o, z, z, o),
        1 => Matrix2c::new(z, o, o, z),
        2 => Matrix2c::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
        _ => Matrix2c::new(o, z, z, -o),
    }
}

/// Pauli decomposition `ρ = ¼(1 + a·σ⊗1 + 1⊗b·σ + Σ T_ij σi⊗σj)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochForm {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochForm {
    pub fn from_matrix(m: &Matrix4c) -> Self {
        let expect = |i: usize, j: usize| (m * pauli(i).kronecker(&pauli(j))).trace().re;
        let mut form = BlochForm {
            a: [0.0; 3],
            b: [0.0; 3],
            t: [[0.0; 3]; 3],
        };
        for i in 0..3 {
            form.a[i] = expect(i + 1, 0);
            form.b[i] = expect(0, i + 1);
            for j in 0..3 {
                form.t[i][j] = expect(i + 1, j + 1);
            }
        }
        form
    }

    fn entropy_a(&self) -> f64 {
        binary_entropy(0.5 * (1.0 + norm3(self.a)))
    }

    fn entropy_b(&self) -> f64 {
        binary_entropy(0.5 * (1.0 + norm3(self.b)))
    }

    /// `Σ_± p_± S(ρ_A|±)` for a projective measurement of B along `basis`.
    pub fn conditional_entropy(&self, basis: &MeasurementBasis) -> f64 {
        let n = basis.direction();
        let bn = dot3(self.b, n);
        let mut tn = [0.0; 3];
        for (i, row) in self.t.iter().enumerate() {
            tn[i] = dot3(*row, n);
        }
        let mut total = 0.0;
        for s in [1.0, -1.0] {
            let weight = 1.0 + s * bn;
            let p = 0.5 * weight;
            if p < MIN_OUTCOME_PROBABILITY {
                continue;
            }
            let r = [self.a[0] + s * tn[0], self.a[1] + s * tn[1], self.a[2] + s * tn[2]];
            let len = (norm3(r) / weight).min(1.0);
            total += p * binary_entropy(0.5 * (1.0 + len));
        }
        total
    }

    /// Information about A gained by measuring B along `basis`,
    /// `J = S(ρ_A) - Σ_± p_± S(ρ_A|±)`.
    pub fn measurement_information(&self, basis: &MeasurementBasis) -> f64 {
        self.entropy_a() - self.conditional_entropy(basis)
    }
}

fn dot3(x: [f64; 3], y: [f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn norm3(x: [f64; 3]) -> f64 {
    dot3(x, x).sqrt()
}

/// `-p log₂p - (1-p) log₂(1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    -xlog2x(p) - xlog2x(1.0 - p)
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy in bits of a spectrum. Eigenvalues in
/// `[-PSD_TOLERANCE, 0)` count as zero.
pub fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    -eigenvalues.iter().map(|&l| xlog2x(l)).sum::<f64>()
}

/// Entropy of one spin with `⟨σz⟩ = c4`; eigenvalues `(1 ± c4)/2`.
pub fn subsystem_entropy(c4: f64) -> f64 {
    binary_entropy(0.5 * (1.0 + c4.clamp(-1.0, 1.0)))
}

/// `I = S(ρ_A) + S(ρ_B) - S(ρ)`.
pub fn mutual_information<S: TwoQubitState + ?Sized>(rho: &S) -> f64 {
    let bloch = rho.bloch();
    let joint = entropy_bits(&rho.eigenvalues());
    (bloch.entropy_a() + bloch.entropy_b() - joint).max(0.0)
}

/// Projective measurement on qubit B along the Bloch direction
/// `(sin θ cos φ, sin θ sin φ, cos θ)`.
///
/// Outcome `+` projects onto `V|0⟩ = cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩` and
/// outcome `-` onto `V|1⟩`, so `θ = 0` measures `σz` with `+` meaning `↑`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return domain(format!("theta = {theta} outside [0, pi]"));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return domain(format!("phi = {phi} outside [0, 2pi)"));
        }
        Ok(Self { theta, phi })
    }

    /// Maps arbitrary angles onto the canonical ranges describing the same
    /// direction.
    pub fn wrapped(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn ket(&self, outcome: Outcome) -> Vector2<Complex64> {
        let (s, co) = (0.5 * self.theta).sin_cos();
        let phase = Complex64::from_polar(1.0, self.phi);
        match outcome {
            Outcome::Plus => Vector2::new(c(co, 0.0), phase * s),
            Outcome::Minus => Vector2::new(phase.conj() * s, c(-co, 0.0)),
        }
    }

    pub fn projector(&self, outcome: Outcome) -> Matrix2c {
        let k = self.ket(outcome);
        k * k.adjoint()
    }
}

/// Result of measuring B: outcome probability and the normalised
/// post-measurement two-qubit state (absent when the outcome is impossible).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    pub probability: f64,
    pub state: Option<Matrix4c>,
}

/// `ρ_k = (1⊗B_k) ρ (1⊗B_k) / p_k`.
pub fn conditional_state(rho: &Matrix4c, basis: &MeasurementBasis, outcome: Outcome) -> ConditionalState {
    let lift = Matrix2c::identity().kronecker(&basis.projector(outcome));
    let unnormalised = lift * rho * lift;
    let p = unnormalised.trace().re;
    if p < MIN_OUTCOME_PROBABILITY {
        return ConditionalState {
            probability: p.max(0.0),
            state: None,
        };
    }
    ConditionalState {
        probability: p,
        state: Some(unnormalised.unscale(p)),
    }
}

/// Reduced state of qubit A.
pub fn partial_trace_b(m: &Matrix4c) -> Matrix2c {
    Matrix2c::from_fn(|i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)])
}

/// Reduced state of qubit B.
pub fn partial_trace_a(m: &Matrix4c) -> Matrix2c {
    Matrix2c::from_fn(|i, j| m[(i, j)] + m[(i + 2, j + 2)])
}

/// Set of projective measurements on B over which `J` is maximised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum MeasurementFamily {
    /// Every direction on the Bloch sphere.
    #[default]
    FullSphere,
    /// Directions in the xy plane (`θ = π/2`).
    Equatorial,
}

/// Classical correlation `C = max J` over the whole Bloch sphere, with the
/// maximising basis.
pub fn classical_correlation<S: TwoQubitState + ?Sized>(rho: &S) -> (f64, MeasurementBasis) {
    maximize_information(&rho.bloch(), MeasurementFamily::FullSphere)
}

/// `C` maximised over the given measurement family.
pub fn classical_correlation_over<S: TwoQubitState + ?Sized>(
    rho: &S,
    family: MeasurementFamily,
) -> (f64, MeasurementBasis) {
    maximize_information(&rho.bloch(), family)
}

/// Deterministic grid search followed by Nelder–Mead (sphere) or golden
/// section (equator) refinement.
pub fn maximize_information(bloch: &BlochForm, family: MeasurementFamily) -> (f64, MeasurementBasis) {
    match family {
        MeasurementFamily::FullSphere => maximize_sphere(bloch),
        MeasurementFamily::Equatorial => maximize_equator(bloch),
    }
}

fn maximize_sphere(bloch: &BlochForm) -> (f64, MeasurementBasis) {
    let objective = |x: [f64; 2]| bloch.measurement_information(&MeasurementBasis::wrapped(x[0], x[1]));
    let d_theta = PI / (GRID_THETA - 1) as f64;
    let d_phi = 2.0 * PI / GRID_PHI as f64;
    let mut samples = Vec::with_capacity(GRID_THETA * GRID_PHI);
    for i in 0..GRID_THETA {
        for j in 0..GRID_PHI {
            let x = [i as f64 * d_theta, j as f64 * d_phi];
            samples.push((objective(x), x));
        }
    }
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = samples[0];
    for &(_, start) in samples.iter().take(4) {
        let refined = nelder_mead(|x| -objective(x), start, 0.5 * d_theta, ANGLE_TOL);
        let value = -refined.1;
        if value > best.0 {
            best = (value, refined.0);
        }
    }
    (best.0.max(0.0), MeasurementBasis::wrapped(best.1[0], best.1[1]))
}

fn maximize_equator(bloch: &BlochForm) -> (f64, MeasurementBasis) {
    let theta = 0.5 * PI;
    let objective = |phi: f64| bloch.measurement_information(&MeasurementBasis::wrapped(theta, phi));
    let d_phi = 2.0 * PI / GRID_PHI as f64;
    let (mut best_value, mut best_phi) = (f64::NEG_INFINITY, 0.0);
    for j in 0..GRID_PHI {
        let phi = j as f64 * d_phi;
        let v = objective(phi);
        if v > best_value {
            best_value = v;
            best_phi = phi;
        }
    }
    let (phi, value) = golden_max(objective, best_phi - d_phi, best_phi + d_phi, 1e-10);
    if value > best_value {
        best_value = value;
        best_phi = phi;
    }
    (best_value.max(0.0), MeasurementBasis::wrapped(theta, best_phi))
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Minimises `f` over the plane from `start`; stops once the simplex is
/// smaller than `tol` in every coordinate.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, start: [f64; 2], step: f64, tol: f64) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut values = simplex.map(&f);
    for _ in 0..2000 {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let spread = (0..2)
            .map(|d| {
                let lo = simplex.iter().map(|x| x[d]).fold(f64::INFINITY, f64::min);
                let hi = simplex.iter().map(|x| x[d]).fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0, f64::max);
        if spread < tol {
            break;
        }
        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        0.5 * (simplex[0][0] + simplex[i][0]),
                        0.5 * (simplex[0][1] + simplex[i][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap_or(0);
    (simplex[best], values[best])
}

/// Quantum discord `Q = I - C` with `C` maximised over the whole sphere.
pub fn discord<S: TwoQubitState + ?Sized>(rho: &S) -> f64 {
    let (c, _) = classical_correlation(rho);
    (mutual_information(rho) - c).max(0.0)
}

/// X-state concurrence `max{0, 2(|b2| - √(a+ a-)), 2(|b1| - a0)}`.
pub fn concurrence_xstate(rho: &XStateDensityMatrix) -> f64 {
    let inner = 2.0 * (rho.b2.norm() - (rho.a_plus * rho.a_minus).max(0.0).sqrt());
    let outer = 2.0 * (rho.b1.norm() - rho.a_zero);
    inner.max(outer).max(0.0)
}

/// Wootters concurrence of an arbitrary two-qubit density matrix.
///
/// With `ρ = W W†`, `W = V √Λ`, the square roots of the spin-flip
/// eigenvalues of `ρ ρ̃` are the singular values of `W† (σy⊗σy) W*`. Taking
/// them directly avoids squaring and re-rooting near-zero eigenvalues, which
/// loses half the digits for nearly pure states.
pub fn concurrence_wootters(rho: &Matrix4c) -> Result<f64> {
    let yy = pauli(2).kronecker(&pauli(2));
    let eig = SymmetricEigen::try_new(*rho, 1e-15, 10_000)
        .ok_or_else(|| Error::Eigen(format!("eigendecomposition of rho failed for {rho}")))?;
    let roots = eig.eigenvalues.map(|l| c(l.max(0.0).sqrt(), 0.0));
    let w = eig.eigenvectors * Matrix4c::from_diagonal(&roots);
    let tau = w.adjoint() * yy * w.map(|z| z.conj());
    let svd = nalgebra::SVD::try_new(tau, false, false, 1e-15, 10_000)
        .ok_or_else(|| Error::Eigen(format!("spin-flip singular values did not converge for {rho}")))?;
    let mut lambdas = [0.0; 4];
    lambdas.copy_from_slice(svd.singular_values.as_slice());
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// `I`, `C`, `Q`, concurrence and the maximising measurement for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub concurrence: f64,
    pub argmax_basis: MeasurementBasis,
}

pub fn correlation_report(rho: &XStateDensityMatrix, family: MeasurementFamily) -> CorrelationReport {
    let mi = mutual_information(rho);
    let (cc, basis) = classical_correlation_over(rho, family);
    CorrelationReport {
        mutual_information: mi,
        classical_correlation: cc.min(mi),
        discord: (mi - cc).max(0.0),
        concurrence: concurrence_xstate(rho),
        argmax_basis: basis,
    }
}
