use std::f64::consts::PI;

use proptest::prelude::*;
use quench_info::kernels::{BetaSet, QuenchProtocol};
use quench_info::quench::{
    closed_form_c_n2, closed_form_i_n2, correlators, correlators_from_betas, measures, measures_from_betas,
    quench_betas,
};
use quench_info::xstate::{mutual_information, MeasurementFamily};

fn riemann_beta(p: &QuenchProtocol, n: u32, points: usize) -> f64 {
    let h = PI / points as f64;
    (0..points)
        .map(|i| {
            let k = (i as f64 + 0.5) * h;
            p.excitation_probability(k).unwrap() * (f64::from(n) * k).cos()
        })
        .sum::<f64>()
        * h
        / PI
}

#[test]
fn correlators_match_riemann_composition() {
    let p = QuenchProtocol::ising(1.0, 5.0).unwrap();
    let oracle: Vec<f64> = [0, 2, 4, 6].iter().map(|&n| riemann_beta(&p, n, 10_000_000)).collect();
    let from_oracle = BetaSet::from_values(oracle).unwrap();
    for n in [2, 4, 6] {
        let a = correlators(&p, n).unwrap();
        let b = correlators_from_betas(&from_oracle, n).unwrap();
        for (x, y) in [(a.c1, b.c1), (a.c2, b.c2), (a.c3, b.c3), (a.c4, b.c4)] {
            assert!((x - y).abs() < 1e-8, "n = {n}: {x} vs {y}");
        }
    }
}

#[test]
fn equatorial_pipeline_matches_closed_forms() {
    for tau in [0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0] {
        let p = QuenchProtocol::ising(1.0, tau).unwrap();
        let betas = quench_betas(&p).unwrap();
        let (b0, b2) = (betas.get(0).unwrap(), betas.get(2).unwrap());
        let r = measures_from_betas(&betas, 2, MeasurementFamily::Equatorial).unwrap();
        let i = closed_form_i_n2(b0, b2).unwrap();
        let c = closed_form_c_n2(b0, b2).unwrap();
        assert!((r.mutual_information - i).abs() < 1e-6, "tau = {tau}");
        assert!((r.classical_correlation - c).abs() < 1e-6, "tau = {tau}");
        assert!((r.discord - (i - c)).abs() < 1e-6, "tau = {tau}");
        let full = measures_from_betas(&betas, 2, MeasurementFamily::FullSphere).unwrap();
        assert!(full.classical_correlation >= c - 1e-9);
        assert!((full.mutual_information - i).abs() < 1e-6);
    }
}

#[test]
fn closed_form_information_at_half_filling() {
    let i = closed_form_i_n2(0.5, 0.0).unwrap();
    let betas = BetaSet::from_values(vec![0.5, 0.0, 0.0, 0.0]).unwrap();
    let rho = quench_info::quench::state_from_betas(&betas, 2).unwrap();
    assert!((i - mutual_information(&rho)).abs() < 1e-14);
    assert!(closed_form_i_n2(1e-14, 0.0).unwrap().abs() < 1e-12);
    assert!(closed_form_c_n2(1e-14, 0.0).unwrap().abs() < 1e-12);
}

#[test]
fn three_spin_without_coupling_is_ising() {
    for tau in [0.3, 5.0, 80.0] {
        let ising = QuenchProtocol::ising(1.0, tau).unwrap();
        let three = QuenchProtocol::three_spin(0.0, tau).unwrap();
        for n in [2, 4, 6] {
            let a = measures(&ising, n, MeasurementFamily::Equatorial).unwrap();
            let b = measures(&three, n, MeasurementFamily::Equatorial).unwrap();
            assert_eq!(a.discord, b.discord);
            assert_eq!(a.concurrence, b.concurrence);
        }
    }
}

#[test]
fn discord_vanishes_in_both_limits() {
    let make: [fn(f64) -> QuenchProtocol; 3] = [
        |t| QuenchProtocol::ising(1.0, t).unwrap(),
        |t| QuenchProtocol::multicritical(t).unwrap(),
        |t| QuenchProtocol::three_spin(0.3, t).unwrap(),
    ];
    for f in make {
        for n in [2, 4, 6] {
            let sudden = measures(&f(1e-9), n, MeasurementFamily::Equatorial).unwrap();
            assert!(sudden.discord < 1e-9 && sudden.concurrence < 1e-8);
            // The multicritical decay is slow (roughly τ^(-0.19)), so only ask
            // for a steady fall over six decades.
            let slow: Vec<f64> = [1e6, 1e9, 1e12]
                .iter()
                .map(|&t| measures(&f(t), n, MeasurementFamily::Equatorial).unwrap().discord)
                .collect();
            assert!(slow[1] < slow[0] && slow[2] < slow[1], "n = {n}: {slow:?}");
            assert!(slow[2] < 0.5 * slow[0], "n = {n}: {slow:?}");
        }
    }
}

fn protocol_strategy() -> impl Strategy<Value = QuenchProtocol> {
    prop_oneof![
        (0.1f64..=1.0, 0.01f64..1e3).prop_map(|(g, t)| QuenchProtocol::ising(g, t).unwrap()),
        (0.01f64..1e3).prop_map(|t| QuenchProtocol::multicritical(t).unwrap()),
        (0.0f64..1.5, 0.01f64..1e3).prop_map(|(j, t)| QuenchProtocol::three_spin(j, t).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reports_are_ordered(p in protocol_strategy(), n in prop::sample::select(vec![2u32, 4, 6])) {
        for family in [MeasurementFamily::Equatorial, MeasurementFamily::FullSphere] {
            let r = measures(&p, n, family).unwrap();
            prop_assert!(r.mutual_information >= r.classical_correlation);
            prop_assert!(r.classical_correlation >= 0.0);
            prop_assert!(r.discord >= 0.0);
            prop_assert!((0.0..=1.0).contains(&r.concurrence));
        }
    }
}
