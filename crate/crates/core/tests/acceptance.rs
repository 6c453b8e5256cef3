//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use quench_info::central::{
    branch_hamiltonian, concurrence_werner, evolve_mode, qubit_state, trace_run, weak_coupling_d, Branch,
    CentralConfig, DecoherenceTrace, ModeState,
};
use quench_info::kernels::{beta_n, defect_density, QuenchProtocol, DEFAULT_BETA_TOL};
use quench_info::quench::{closed_form_c_n2, closed_form_i_n2, measures_from_betas, quench_betas};
use quench_info::scaling::{
    fit_loglog, half_max_width, is_unimodal, linear_grid, locate_peak, log_grid, sweep_j3, sweep_tau, Column,
    ScalingFit, SweepTable,
};
use quench_info::xstate::{
    concurrence_wootters, concurrence_xstate, discord, MeasurementFamily, TwoQubitState, XStateDensityMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EQ: MeasurementFamily = MeasurementFamily::Equatorial;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(what.as_ref());
        if !ok {
            self.pass = false;
            self.detail.push_str(" [x]");
        }
    }
}

fn fit_slope(table: &SweepTable, column: Column, window: (f64, f64)) -> Result<ScalingFit, String> {
    fit_loglog(table, column, window).map_err(|e| e.to_string())
}

fn within(slope: Result<ScalingFit, String>, target: f64, tol: f64) -> (bool, String) {
    match slope {
        Ok(f) => ((f.slope - target).abs() <= tol, format!("{:.4}", f.slope)),
        Err(e) => (false, format!("no fit ({e})")),
    }
}

fn kz_defect_slope() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let fit_b0 = |p: QuenchProtocol, lo: f64, hi: f64| -> Result<f64, String> {
        let grid = log_grid(lo, hi, 21).map_err(|e| e.to_string())?;
        let pts: Vec<(usize, f64, f64)> = grid
            .iter()
            .enumerate()
            .map(|(i, &t)| (i, t, p.with_tau(t).and_then(|q| defect_density(&q)).unwrap_or(f64::NAN)))
            .collect();
        quench_info::scaling::fit_points(&pts, (lo, hi)).map(|f| f.slope).map_err(|e| e.to_string())
    };
    let ising = fit_b0(QuenchProtocol::ising(1.0, 1.0).unwrap(), 1e2, 1e4);
    let mcp = fit_b0(QuenchProtocol::multicritical(1.0).unwrap(), 1e2, 1e5);
    match ising {
        Ok(s) => out.check((s + 0.5).abs() <= 0.02, format!("ising slope {s:.4} (-0.5 +/- 0.02)")),
        Err(e) => out.check(false, format!("ising fit failed: {e}")),
    }
    match mcp {
        Ok(s) => out.check((s + 1.0 / 6.0).abs() <= 0.02, format!("multicritical slope {s:.4} (-1/6 +/- 0.02)")),
        Err(e) => out.check(false, format!("multicritical fit failed: {e}")),
    }
    let elapsed = start.elapsed();
    out.check(elapsed < Duration::from_secs(10), format!("{:.2} s", elapsed.as_secs_f64()));
    out
}

fn discord_scaling() -> (Outcome, String) {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut info = Vec::new();
    let grid = log_grid(1e2, 1e5, 31).unwrap();
    let ising = QuenchProtocol::ising(1.0, 1.0).unwrap();
    for n in [2, 4, 6] {
        let table = sweep_tau(&ising, n, &grid, EQ).unwrap();
        let (ok, s) = within(fit_slope(&table, Column::Discord, (1e3, 1e5)), -0.5, 0.05);
        out.check(ok, format!("ising n={n} Q slope {s} on [1e3,1e5]"));
        let (_, s_short) = within(fit_slope(&table, Column::Discord, (1e2, 1e4)), -0.5, 0.05);
        info.push(format!("ising n={n} Q slope on [1e2,1e4] {s_short}"));
        let full = sweep_tau(&ising, n, &log_grid(1e3, 1e5, 11).unwrap(), MeasurementFamily::FullSphere).unwrap();
        let (_, s_full) = within(fit_slope(&full, Column::Discord, (1e3, 1e5)), -0.5, 0.05);
        info.push(format!("ising n={n} full-sphere Q slope {s_full}"));
    }
    let mcp = sweep_tau(&QuenchProtocol::multicritical(1.0).unwrap(), 2, &grid, EQ).unwrap();
    let (ok, s) = within(fit_slope(&mcp, Column::Discord, (1e2, 1e5)), -0.19, 0.04);
    out.check(ok, format!("multicritical n=2 Q slope {s} (-0.19 +/- 0.04)"));
    let (ok, s) = within(fit_slope(&mcp, Column::Concurrence, (1e2, 1e5)), -0.13, 0.04);
    out.check(ok, format!("multicritical n=2 Cnc slope {s} (-0.13 +/- 0.04)"));
    let zeros = mcp.column(Column::Concurrence).iter().filter(|&&c| c == 0.0).count();
    info.push(format!("multicritical n=2 Cnc is exactly 0 at {zeros}/{} grid points", grid.len()));
    let elapsed = start.elapsed();
    out.check(elapsed < Duration::from_secs(300), format!("{:.1} s", elapsed.as_secs_f64()));
    (out, info.join("; "))
}

fn closed_form_equivalence() -> Outcome {
    let mut out = Outcome::new();
    let mut worst: f64 = 0.0;
    for tau in [0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0] {
        let betas = quench_betas(&QuenchProtocol::ising(1.0, tau).unwrap()).unwrap();
        let (b0, b2) = (betas.get(0).unwrap(), betas.get(2).unwrap());
        let r = measures_from_betas(&betas, 2, EQ).unwrap();
        let i = closed_form_i_n2(b0, b2).unwrap();
        let c = closed_form_c_n2(b0, b2).unwrap();
        for err in [r.mutual_information - i, r.classical_correlation - c, r.discord - (i - c)] {
            worst = worst.max(err.abs());
        }
    }
    out.check(worst <= 1e-6, format!("max deviation {worst:.2e} (1e-6)"));
    out
}

fn fig4_reproduction() -> Outcome {
    let mut out = Outcome::new();
    let grid = log_grid(0.1, 1e3, 61).unwrap();
    let ising = QuenchProtocol::ising(1.0, 1.0).unwrap();
    let mut peaks = Vec::new();
    for n in [2, 4, 6] {
        let table = sweep_tau(&ising, n, &grid, EQ).unwrap();
        let q = table.column(Column::Discord);
        out.check(is_unimodal(&q, 1e-3), format!("n={n} unimodal"));
        let peak = locate_peak(&grid, &q, true).unwrap();
        peaks.push((n, peak));
        if n == 2 {
            let cnc = table.column(Column::Concurrence);
            let first_entangled = cnc.iter().position(|&c| c > 0.0);
            match first_entangled {
                Some(i) if i > 0 => {
                    let below_ok = (0..i).all(|j| cnc[j] == 0.0 && q[j] > 0.0);
                    out.check(below_ok, format!("n=2 Cnc = 0 < Q for tau < {:.3}", grid[i]));
                }
                _ => out.check(false, "n=2 no zero-concurrence regime at small tau"),
            }
        }
    }
    for w in peaks.windows(2) {
        let ((n0, a), (n1, b)) = (w[0], w[1]);
        out.check(
            b.location > a.location && b.height < a.height,
            format!(
                "peak n={n0} ({:.3}, {:.3e}) -> n={n1} ({:.3}, {:.3e})",
                a.location, a.height, b.location, b.height
            ),
        );
    }
    out
}

fn three_spin() -> Outcome {
    let mut out = Outcome::new();
    let grid = linear_grid(0.0, 1.2, 241).unwrap();
    let taus = [1.0, 5.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 5000.0];
    let mut entangled_above = 0;
    let mut widths = Vec::new();
    let mut distances = Vec::new();
    for &tau in &taus {
        let table = sweep_j3(tau, 2, &grid, EQ).unwrap();
        let q = table.column(Column::Discord);
        let cnc = table.column(Column::Concurrence);
        entangled_above += grid.iter().zip(&cnc).filter(|(j, c)| **j > 0.5 && **c != 0.0).count();
        let peak = locate_peak(&grid, &q, false).unwrap();
        widths.push((tau, half_max_width(&grid, &q).unwrap()));
        distances.push((tau, (peak.location - 0.5).abs()));
    }
    out.check(entangled_above == 0, format!("Cnc != 0 at {entangled_above} points with J3 > 0.5"));
    // Below tau ~ 5 the peak still sits at J3 = 0; sharpening starts once it has moved off the edge.
    let sharpening: Vec<_> = widths.iter().filter(|w| w.0 >= 5.0).collect();
    let narrowing = sharpening.windows(2).all(|w| w[1].1 < w[0].1);
    out.check(
        narrowing,
        format!(
            "half-max width {}",
            sharpening.iter().map(|(t, w)| format!("{t}:{w:.3}")).collect::<Vec<_>>().join(" ")
        ),
    );
    let late: Vec<_> = distances.iter().filter(|d| d.0 >= 200.0).collect();
    let approaching = late.windows(2).all(|w| w[1].1 < w[0].1) && late.last().unwrap().1 < 0.02;
    out.check(
        approaching,
        format!(
            "|J3_peak - 0.5| {}",
            distances.iter().map(|(t, d)| format!("{t}:{d:.4}")).collect::<Vec<_>>().join(" ")
        ),
    );
    out
}

fn bessel_i(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powi(m as i32) / (1..=m).map(f64::from).product::<f64>();
    let mut sum = term;
    for j in 1..500 {
        let j = f64::from(j);
        term *= half * half / (j * (j + f64::from(m)));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

fn bessel_identity() -> Outcome {
    let mut out = Outcome::new();
    let mut worst: f64 = 0.0;
    for tau in [0.1, 1.0, 10.0] {
        let p = QuenchProtocol::ising(1.0, tau).unwrap();
        let a = PI * tau;
        for n in [0u32, 2, 4, 6] {
            let oracle = (-0.5 * a).exp() * bessel_i(n / 2, 0.5 * a);
            worst = worst.max((beta_n(&p, n, DEFAULT_BETA_TOL).unwrap() - oracle).abs());
        }
    }
    out.check(worst <= 1e-8, format!("max deviation {worst:.2e} (1e-8)"));
    out
}

fn concurrence_oracles() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let w: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let total = w[0] + w[1] + 2.0 * w[2];
        let (ap, am, a0) = (w[0] / total, w[1] / total, w[2] / total);
        let b1 = Complex64::from_polar((ap * am).sqrt() * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI));
        let b2 = Complex64::from_polar(a0 * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI));
        let rho = XStateDensityMatrix::new(ap, am, a0, b1, b2).unwrap();
        worst = worst.max((concurrence_wootters(&rho.matrix()).unwrap() - concurrence_xstate(&rho)).abs());
    }
    out.check(worst <= 1e-9, format!("random X states max deviation {worst:.2e}"));
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let (a, d) = (i as f64 / 19.0, j as f64 / 19.0);
            let w = concurrence_wootters(&qubit_state(a, d).unwrap().matrix()).unwrap();
            worst = worst.max((concurrence_werner(a, d).unwrap() - w).abs());
        }
    }
    out.check(worst <= 1e-9, format!("Werner grid max deviation {worst:.2e}"));
    let at = concurrence_werner(1.0 / 3.0, 1.0).unwrap();
    let above = concurrence_werner(1.0 / 3.0 + 1e-9, 1.0).unwrap();
    out.check(at == 0.0 && above > 0.0, format!("threshold a=1/3: {at:e}, just above {above:.2e}"));
    out
}

fn coupled_trace() -> (DecoherenceTrace, CentralConfig, Duration) {
    let grid = vec![50.0, 100.0, 150.0, 200.0, 251.0];
    let cfg = CentralConfig::new(500, 1e-4, 250.0, 1.0, 0.9, quench_info::central::DEFAULT_H_START, grid).unwrap();
    let start = Instant::now();
    let trace = trace_run(&cfg).unwrap();
    (trace, cfg, start.elapsed())
}

fn decoherence(weak: &(DecoherenceTrace, CentralConfig, Duration)) -> Outcome {
    let mut out = Outcome::new();
    let zero = CentralConfig::new(100, 0.0, 250.0, 1.0, 0.9, 2.0, vec![0.0, 100.0, 251.0, 600.0]).unwrap();
    let ones = trace_run(&zero).unwrap().rows.iter().all(|r| r.decoherence == 1.0);
    out.check(ones, "delta=0 gives D = 1");

    let (trace, _, elapsed) = weak;
    let d251 = trace.rows.last().unwrap().decoherence;
    out.check((d251 - 0.7025).abs() <= 0.05, format!("D(251) = {d251:.4} (0.7025 +/- 0.05)"));
    let cnc = concurrence_werner(0.9, 0.7025).unwrap();
    out.check((cnc - 0.704).abs() <= 0.03, format!("Cnc(a=0.9, D=0.7025) = {cnc:.5}"));
    out.check(*elapsed < Duration::from_secs(300), format!("N=500 trace {:.1} s", elapsed.as_secs_f64()));

    let grid: Vec<f64> = (0..=800).map(f64::from).collect();
    let cfg = CentralConfig::new(500, 0.01, 250.0, 1.0, 0.9, 2.0, grid).unwrap();
    let rows = trace_run(&cfg).unwrap().rows;
    let mut revivals = Vec::new();
    for m in 1.. {
        let tm = f64::from(m) * PI / (4.0 * cfg.delta());
        if cfg.field(tm) <= -1.0 {
            break;
        }
        let best = rows.iter().filter(|r| (r.t - tm).abs() <= 10.0).map(|r| r.decoherence).fold(0.0, f64::max);
        revivals.push(best);
    }
    out.check(
        !revivals.is_empty() && revivals.iter().all(|&d| d >= 0.9),
        format!("|h|<1 revival maxima {}", revivals.iter().map(|d| format!("{d:.3}")).collect::<Vec<_>>().join(" ")),
    );
    let beyond: Vec<f64> = rows.iter().filter(|r| r.h < -1.0).map(|r| r.decoherence).collect();
    let local_max: Vec<f64> = beyond
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] > w[2] && w[1] > 0.1)
        .map(|w| w[1])
        .collect();
    let top = beyond.iter().copied().fold(0.0, f64::max);
    out.check(
        top < 0.5 && local_max.len() >= 2,
        format!("h<-1: max D {top:.3}, {} partial revivals", local_max.len()),
    );
    let ordered = rows.iter().all(|r| {
        let q = |a: f64| discord(&qubit_state(a, r.decoherence).unwrap());
        q(0.3) < q(0.5) && q(0.5) < q(0.9)
    });
    out.check(ordered, "Q(a=0.3) < Q(a=0.5) < Q(a=0.9) along the trace");
    out
}

fn hygiene(weak: &(DecoherenceTrace, CentralConfig, Duration)) -> Outcome {
    let mut out = Outcome::new();
    let (trace, cfg, _) = weak;
    out.check(trace.max_step_drift < 1e-8, format!("max step drift {:.2e}", trace.max_step_drift));
    let worst = trace
        .rows
        .iter()
        .map(|r| {
            let approx = weak_coupling_d(r.t, cfg).ln();
            ((r.decoherence.ln() - approx) / approx).abs()
        })
        .fold(0.0, f64::max);
    out.check(worst <= 0.1, format!("ln D vs weak coupling max rel. deviation {worst:.3}"));

    let frozen = CentralConfig::new(8, 0.05, 1e12, 0.7, 0.5, 10.0, vec![]).unwrap();
    let mut err: f64 = 0.0;
    for &k in &[0.3, 1.1, 2.5] {
        for branch in [Branch::Plus, Branch::Minus] {
            let ham = branch_hamiltonian(k, 0.0, branch, &frozen);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let psi = ModeState::new(Complex64::new(s, 0.0), Complex64::new(0.0, s));
            let t = 7.5;
            let got = evolve_mode(k, branch, &frozen, 0.0, t, psi).unwrap();
            let e = ham.gap() / 2.0;
            let (sn, cs) = (e * t).sin_cos();
            let u = nalgebra::Matrix2::identity() * Complex64::new(cs, 0.0) - ham.matrix() * Complex64::new(0.0, sn / e);
            err = err.max((got.as_vector() - u * psi.as_vector()).norm());
        }
    }
    out.check(err <= 1e-8, format!("frozen-H propagation error {err:.2e}"));
    out
}

fn determinism() -> Outcome {
    let mut out = Outcome::new();
    let grid = log_grid(0.1, 1e3, 25).unwrap();
    let run = |threads: usize, p: QuenchProtocol| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let table = pool.install(|| sweep_tau(&p, 2, &grid, EQ)).unwrap();
        let mut bytes = Vec::new();
        table.write_csv(&mut bytes).unwrap();
        bytes
    };
    for p in [QuenchProtocol::ising(1.0, 1.0).unwrap(), QuenchProtocol::multicritical(1.0).unwrap()] {
        let same = run(1, p) == run(4, p);
        out.check(same, format!("{:?} sweep bytes identical for 1 and 4 workers", p.kind()));
    }
    out
}

fn report(id: u32, name: &str, o: &Outcome) -> bool {
    println!("criterion {id:>2} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    o.pass
}

fn main() -> ExitCode {
    let mut passed = 0;
    let mut total = 0;
    let mut tally = |ok: bool| {
        total += 1;
        passed += usize::from(ok);
    };
    tally(report(1, "Kibble-Zurek defect slope", &kz_defect_slope()));
    let (o, info) = discord_scaling();
    tally(report(2, "discord scaling", &o));
    println!("   info: {info}");
    tally(report(3, "closed-form equivalence", &closed_form_equivalence()));
    tally(report(4, "discord vs tau shape", &fig4_reproduction()));
    tally(report(5, "three-spin", &three_spin()));
    tally(report(6, "Bessel identity", &bessel_identity()));
    tally(report(7, "concurrence oracles", &concurrence_oracles()));
    let weak = coupled_trace();
    tally(report(8, "decoherence", &decoherence(&weak)));
    tally(report(9, "numerical hygiene", &hygiene(&weak)));
    tally(report(10, "determinism", &determinism()));
    println!("acceptance: {passed}/{total} criteria passed");
    if passed == total {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
