use std::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use quench_info::central::{
    approx_fk, branch_hamiltonian, concurrence_werner, decoherence_factor, evolve_mode, initial_mode_state,
    mode_momenta, qubit_state, trace_run, weak_coupling_d, Branch, CentralConfig, Environment, ModeEvolver,
    ModeHamiltonian, ModeState,
};
use quench_info::kernels::QuenchProtocol;
use quench_info::xstate::{concurrence_wootters, discord, mutual_information, TwoQubitState};

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn momentum_sum_converges_quadratically() {
    // Midpoint rule on (0, π) for a non-periodic integrand.
    let f = |k: f64| k * k;
    let exact = PI.powi(3) / 3.0;
    let err = |n: usize| {
        let ks = mode_momenta(n).unwrap();
        (2.0 / n as f64 * ks.iter().map(|&k| f(k)).sum::<f64>() - exact / PI).abs()
    };
    let (e1, e2) = (err(100), err(200));
    assert!((e1 / e2 - 4.0).abs() < 0.05, "{e1} {e2}");
}

#[test]
fn frozen_hamiltonian_matches_matrix_exponential() {
    // τ = 10¹² freezes the field at h ≈ 1 over the integration window.
    let cfg = CentralConfig::new(8, 0.05, 1e12, 0.7, 0.5, 10.0, vec![]).unwrap();
    for &k in &[0.3, 1.1, 2.5] {
        for branch in [Branch::Plus, Branch::Minus] {
            let ham = branch_hamiltonian(k, 0.0, branch, &cfg);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let start = ModeState::new(cx(s), Complex64::new(0.0, s));
            let t = 7.5;
            let out = evolve_mode(k, branch, &cfg, 0.0, t, start).unwrap();
            // exp(-iHt) = cos(Et) - i sin(Et) H/E for traceless H with H² = E².
            let e = ham.z.hypot(ham.x);
            let (sn, cs) = (e * t).sin_cos();
            let h = ham.matrix();
            let expected = (nalgebra::Matrix2::identity() * cx(cs) - h * Complex64::new(0.0, sn / e)) * start.as_vector();
            assert!((out.as_vector() - expected).norm() < 1e-8);
        }
    }
}

#[test]
fn landau_zener_excitation() {
    let tau = 1e4;
    let cfg = CentralConfig::new(8, 0.0, tau, 1.0, 0.5, 2.0, vec![]).unwrap();
    // The factor 2 in H_k doubles the effective sweep time, so the branch
    // excitation is the Ising probability at 2τ.
    let oracle = QuenchProtocol::ising(1.0, 2.0 * tau).unwrap();
    for target in [0.2f64, 0.5, 0.8] {
        let k = PI - (-target.ln() / (2.0 * PI * tau)).sqrt().asin();
        let t_end = cfg.time_of_field(0.0);
        let mut mode = ModeEvolver::from_ground_state(k, Branch::Plus, &cfg);
        mode.advance_to(t_end).unwrap();
        let excited = branch_hamiltonian(k, t_end, Branch::Plus, &cfg).excited_population(&mode.state());
        let p = oracle.excitation_probability(k).unwrap();
        assert!(((excited - p) / p).abs() < 0.05, "k = {k}: {excited} vs {p}");
        assert!(mode.max_step_drift() < 1e-8);
    }
}

#[test]
fn initial_state_is_ground_state() {
    let cfg = CentralConfig::new(16, 0.01, 100.0, 0.8, 0.5, 10.0, vec![]).unwrap();
    for k in mode_momenta(16).unwrap() {
        for branch in [Branch::Plus, Branch::Minus] {
            let s = initial_mode_state(k, branch, &cfg);
            let ham = branch_hamiltonian(k, cfg.t_start(), branch, &cfg);
            let e = -ham.z.hypot(ham.x);
            let residual = ham.matrix() * s.as_vector() - s.as_vector() * cx(e);
            assert!(residual.norm() < 1e-12);
            assert!(s.u.im == 0.0 && s.u.re >= 0.0);
        }
    }
    // Dominant positive σz field: the ground state is |k, -k⟩.
    let far = ModeHamiltonian { z: 1e9, x: 1.0 }.ground_state();
    assert!(far.v.norm() > 1.0 - 1e-15 && far.u.norm() < 1e-8);
}

#[test]
fn norm_is_conserved_along_trajectories() {
    let grid: Vec<f64> = (0..=20).map(|i| -100.0 + 30.0 * i as f64).collect();
    let cfg = CentralConfig::new(60, 0.02, 100.0, 1.0, 0.6, 3.0, grid).unwrap();
    let mut env = Environment::new(&cfg).unwrap();
    for &t in cfg.t_grid() {
        env.advance_to(t).unwrap();
        assert!(env.max_norm_error() < 1e-8);
        let fs = env.mode_fidelities();
        assert!(fs.iter().all(|f| (0.0..=1.0).contains(f)));
        let d = env.decoherence_factor();
        assert!((0.0..=1.0).contains(&d));
    }
    assert!(env.max_step_drift() < 1e-8);
}

#[test]
fn zero_coupling_trace() {
    let grid = vec![-50.0, 0.0, 40.0, 120.0];
    let cfg = CentralConfig::new(40, 0.0, 50.0, 1.0, 0.7, 3.0, grid).unwrap();
    let trace = trace_run(&cfg).unwrap();
    let rho = qubit_state(0.7, 1.0).unwrap();
    for row in &trace.rows {
        assert_eq!(row.decoherence, 1.0);
        assert!((row.discord - discord(&rho)).abs() < 1e-12);
        assert!((row.concurrence - 0.55).abs() < 1e-12);
    }
    assert_eq!(decoherence_factor(&cfg, 75.0).unwrap(), 1.0);
}

#[test]
fn coherence_survives_before_the_crossing() {
    let cfg = CentralConfig::new(100, 1e-3, 100.0, 1.0, 0.5, 10.0, vec![]).unwrap();
    let d = decoherence_factor(&cfg, cfg.time_of_field(3.0)).unwrap();
    assert!(d > 1.0 - 1e-3, "{d}");
}

#[test]
fn werner_state_eigenvalues() {
    let (a, d) = (0.9, 0.7025);
    let rho = qubit_state(a, d).unwrap();
    let mut dense: Vec<f64> = SymmetricEigen::new(rho.matrix()).eigenvalues.iter().copied().collect();
    dense.sort_by(f64::total_cmp);
    let mut expected = vec![(1.0 - a) / 4.0, (1.0 - a) / 4.0, (1.0 + a) / 4.0 + a * d.sqrt() / 2.0, (1.0 + a) / 4.0 - a * d.sqrt() / 2.0];
    expected.sort_by(f64::total_cmp);
    for (x, y) in dense.iter().zip(&expected) {
        assert!((x - y).abs() < 1e-12);
    }
    let cnc = concurrence_werner(a, d).unwrap();
    assert!((cnc - 0.70434).abs() < 1e-4);
    assert!((cnc - concurrence_wootters(&rho.matrix()).unwrap()).abs() < 1e-9);
}

#[test]
fn werner_limits() {
    let mixed = qubit_state(0.0, 0.4).unwrap().matrix();
    assert!((mixed - Matrix4::identity() * cx(0.25)).norm() < 1e-15);
    let pure = qubit_state(1.0, 1.0).unwrap().matrix();
    assert!((pure * pure - pure).norm() < 1e-15);
}

#[test]
fn werner_concurrence_matches_wootters_on_grid() {
    for i in 0..20 {
        for j in 0..20 {
            let (a, d) = (i as f64 / 19.0, j as f64 / 19.0);
            let w = concurrence_wootters(&qubit_state(a, d).unwrap().matrix()).unwrap();
            assert!((concurrence_werner(a, d).unwrap() - w).abs() < 1e-9, "a = {a}, D = {d}");
        }
    }
}

#[test]
fn discord_bounded_and_monotone_in_coherence() {
    for i in 1..=10 {
        let a = i as f64 / 10.0;
        let mut previous = 0.0;
        for j in 0..=20 {
            let d = j as f64 / 20.0;
            let rho = qubit_state(a, d).unwrap();
            let q = discord(&rho);
            assert!(q >= 0.0 && q <= mutual_information(&rho) + 1e-12);
            assert!(q >= previous - 1e-9, "a = {a}, D = {d}: {q} < {previous}");
            previous = q;
        }
    }
}

#[test]
fn exact_fidelity_follows_approximation_in_depleted_band() {
    let (n, delta, tau) = (500, 1e-3, 250.0);
    let cfg = CentralConfig::new(n, delta, tau, 1.0, 0.9, 2.0, vec![]).unwrap();
    let ks = mode_momenta(n).unwrap();
    let mut env = Environment::new(&cfg).unwrap();
    let mut checked = 0;
    for t in [60.0, 100.0, 150.0, 200.0] {
        env.advance_to(t).unwrap();
        let fs = env.mode_fidelities();
        for (&k, f) in ks.iter().zip(fs) {
            let q = PI - k;
            let x = (-2.0 * PI * tau * q * q).exp();
            if !(0.05..=0.95).contains(&x) {
                continue;
            }
            let approx = 1.0 - approx_fk(q, t, delta, tau);
            assert!(((1.0 - f) - approx).abs() < 0.2 * approx, "t = {t}, q = {q}");
            checked += 1;
        }
    }
    assert!(checked >= 8);
}

#[test]
fn exact_product_matches_weak_coupling_form() {
    let grid: Vec<f64> = (1..=5).map(|i| 50.0 * i as f64).collect();
    let cfg = CentralConfig::new(500, 1e-4, 250.0, 1.0, 0.9, 2.0, grid).unwrap();
    let trace = trace_run(&cfg).unwrap();
    for row in &trace.rows {
        let exact = row.decoherence.ln();
        let approx = weak_coupling_d(row.t, &cfg).ln();
        assert!(((exact - approx) / approx).abs() < 0.1, "t = {}: {exact} vs {approx}", row.t);
        assert!(row.discord <= mutual_information(&qubit_state(0.9, row.decoherence).unwrap()));
    }
    // Monotone decay after the crossing.
    for w in trace.rows.windows(2) {
        assert!(w[1].decoherence < w[0].decoherence);
        assert!(w[1].discord < w[0].discord);
        assert!(w[1].concurrence < w[0].concurrence);
    }
}

#[test]
fn weak_werner_weight_is_never_entangled() {
    let grid: Vec<f64> = (0..=30).map(|i| -40.0 + 15.0 * i as f64).collect();
    let cfg = CentralConfig::new(100, 0.01, 100.0, 1.0, 0.3, 2.0, grid).unwrap();
    let trace = trace_run(&cfg).unwrap();
    for row in &trace.rows {
        assert_eq!(row.concurrence, 0.0);
        assert!(row.discord > 0.0);
    }
}

#[test]
fn invalid_configurations() {
    assert!(CentralConfig::new(500, 1e-4, 250.0, 1.0, 0.9, 1.2, vec![]).is_err());
    assert!(CentralConfig::new(500, 0.2, 250.0, 1.0, 0.9, 2.0, vec![]).is_err());
    assert!(CentralConfig::new(500, 1e-4, 250.0, 0.0, 0.9, 2.0, vec![]).is_err());
    assert!(mode_momenta(3).is_err());
}
