use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use quench_info::central::{trace_run, CentralConfig, DecoherenceRow};
use quench_info::kernels::QuenchProtocol;
use quench_info::scaling::{
    fit_points, format_number, linear_grid, log_grid, measure_row, sweep_j3, sweep_tau, Abscissa, SweepTable,
};
use quench_info::xstate::MeasurementFamily;

use crate::args::{
    Command, DecohereArgs, FitArgs, Measurement, MeasuresArgs, Over, OutputArgs, ProtocolArgs, ProtocolKind,
    Spacing, SweepArgs, WorkerArgs,
};
use crate::error::{CliError, CliResult};

pub const DECOHERE_HEADER: &str = "t,h,D,Q,Cnc";
pub const FIT_HEADER: &str = "column,x,slope,intercept,r2,window_min,window_max,points";

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Measures(a) => cmd_measures(&a),
        Command::Sweep(a) => with_workers(&a.workers, || cmd_sweep(&a)),
        Command::Fit(a) => cmd_fit(&a),
        Command::Decohere(a) => with_workers(&a.workers, || cmd_decohere(&a)),
    }
}

fn with_workers<F>(w: &WorkerArgs, f: F) -> CliResult<()>
where
    F: FnOnce() -> CliResult<()> + Send,
{
    let threads = match w.workers {
        Some(0) => return Err(CliError::invalid("--workers must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Numerical(format!("cannot start worker pool: {e}")))?;
    log::info!("running on {threads} worker(s)");
    pool.install(f)
}

fn family(m: Measurement) -> MeasurementFamily {
    match m {
        Measurement::Full => MeasurementFamily::FullSphere,
        Measurement::Equatorial => MeasurementFamily::Equatorial,
    }
}

/// The protocol described by the flags, with `tau` as its sweep time.
/// `j3_required` is false for J3 sweeps, where the grid supplies it.
fn protocol(p: &ProtocolArgs, tau: f64, j3_required: bool) -> CliResult<QuenchProtocol> {
    let built = match p.protocol {
        ProtocolKind::Ising => {
            if p.j3.is_some() {
                return Err(CliError::invalid("--j3 applies only to --protocol three-spin"));
            }
            QuenchProtocol::ising(p.gamma.unwrap_or(1.0), tau)
        }
        ProtocolKind::Multicritical => {
            if p.gamma.is_some() || p.j3.is_some() {
                return Err(CliError::invalid("--gamma and --j3 do not apply to --protocol multicritical"));
            }
            QuenchProtocol::multicritical(tau)
        }
        ProtocolKind::ThreeSpin => {
            if p.gamma.is_some() {
                return Err(CliError::invalid("--gamma does not apply to --protocol three-spin"));
            }
            let j3 = match (p.j3, j3_required) {
                (Some(j), true) => j,
                (None, true) => return Err(CliError::invalid("--protocol three-spin needs --j3")),
                (Some(_), false) => return Err(CliError::invalid("--j3 conflicts with a J3 sweep; use --j3-min/--j3-max")),
                (None, false) => 0.0,
            };
            QuenchProtocol::three_spin(j3, tau)
        }
    };
    Ok(built?)
}

fn open_output(o: &OutputArgs) -> CliResult<Box<dyn Write>> {
    Ok(match &o.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::invalid(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_out(o: &OutputArgs, bytes: &[u8]) -> CliResult<()> {
    let mut out = open_output(o)?;
    out.write_all(bytes)
        .and_then(|()| out.flush())
        .map_err(|e| CliError::invalid(format!("write failed: {e}")))
}

fn table_bytes(table: &SweepTable) -> Vec<u8> {
    let mut bytes = Vec::new();
    table.write_csv(&mut bytes).expect("writing to memory");
    bytes
}

/// Writes the table and reports failed rows, if any, as a numerical error.
fn emit_table(table: &SweepTable, o: &OutputArgs) -> CliResult<()> {
    write_out(o, &table_bytes(table))?;
    let failed: Vec<String> = table
        .rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.error.as_ref().map(|e| format!("row {i}: {e}")))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        for f in &failed {
            log::error!("{f}");
        }
        Err(CliError::Numerical(format!("{} of {} rows failed", failed.len(), table.rows.len())))
    }
}

pub fn cmd_measures(a: &MeasuresArgs) -> CliResult<()> {
    let p = protocol(&a.protocol, a.tau, true)?;
    quench_info::quench::QuenchMeasureRequest::new(p, a.n)?;
    let row = measure_row(&p, a.n, family(a.measurement));
    emit_table(
        &SweepTable {
            abscissa: Abscissa::Tau,
            rows: vec![row],
        },
        &a.output,
    )
}

fn grid(min: Option<f64>, max: Option<f64>, points: usize, spacing: Spacing, what: &str) -> CliResult<Vec<f64>> {
    let (Some(lo), Some(hi)) = (min, max) else {
        return Err(CliError::invalid(format!("--{what}-min and --{what}-max are required")));
    };
    if points < 2 && hi > lo {
        return Err(CliError::invalid("--points must be at least 2 for a non-degenerate range"));
    }
    Ok(match spacing {
        Spacing::Log => log_grid(lo, hi, points)?,
        Spacing::Linear => linear_grid(lo, hi, points)?,
    })
}

pub fn cmd_sweep(a: &SweepArgs) -> CliResult<()> {
    let fam = family(a.measurement);
    let table = match a.over {
        Over::Tau => {
            if a.tau.is_some() || a.j3_min.is_some() || a.j3_max.is_some() {
                return Err(CliError::invalid("a tau sweep takes --tau-min/--tau-max, not --tau or --j3-min/--j3-max"));
            }
            let g = grid(a.tau_min, a.tau_max, a.points, a.spacing.unwrap_or(Spacing::Log), "tau")?;
            let p = protocol(&a.protocol, g[0], true)?;
            sweep_tau(&p, a.n, &g, fam)?
        }
        Over::J3 => {
            if a.protocol.protocol != ProtocolKind::ThreeSpin {
                return Err(CliError::invalid("--over j3 needs --protocol three-spin"));
            }
            if a.tau_min.is_some() || a.tau_max.is_some() {
                return Err(CliError::invalid("a J3 sweep takes a single --tau"));
            }
            let tau = a.tau.ok_or_else(|| CliError::invalid("--over j3 needs --tau"))?;
            protocol(&a.protocol, tau, false)?;
            let g = grid(a.j3_min, a.j3_max, a.points, a.spacing.unwrap_or(Spacing::Linear), "j3")?;
            sweep_j3(tau, a.n, &g, fam)?
        }
    };
    log::info!("{} rows computed", table.rows.len());
    emit_table(&table, &a.output)
}

fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    let mut bytes = Vec::new();
    let result = if path == Path::new("-") {
        io::stdin().lock().read_to_end(&mut bytes)
    } else {
        File::open(path).and_then(|mut f| f.read_to_end(&mut bytes))
    };
    result.map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(bytes)
}

pub fn cmd_fit(a: &FitArgs) -> CliResult<()> {
    let bytes = read_input(&a.input)?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes.as_slice());
    let headers = reader
        .headers()
        .map_err(|e| CliError::invalid(format!("bad CSV header: {e}")))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::invalid(format!("column `{name}` not in header `{}`", headers.iter().collect::<Vec<_>>().join(","))))
    };
    let x_name = a.x.clone().unwrap_or_else(|| if headers.iter().any(|h| h == "j3") { "j3" } else { "tau" }.into());
    let (xi, yi) = (find(&x_name)?, find(&a.column)?);
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::invalid(format!("row {row}: {e}")))?;
        let cell = |i: usize| -> CliResult<f64> {
            let s = record.get(i).unwrap_or("");
            s.parse::<f64>()
                .map_err(|_| CliError::invalid(format!("row {row}: cannot parse `{s}` in column {}", &headers[i])))
        };
        points.push((row, cell(xi)?, cell(yi)?));
    }
    let fit = fit_points(&points, (a.window_min, a.window_max))?;
    let line = [
        a.column.clone(),
        x_name,
        format_number(fit.slope),
        format_number(fit.intercept),
        format_number(fit.r_squared),
        format_number(fit.window.0),
        format_number(fit.window.1),
        fit.n_points.to_string(),
    ]
    .join(",");
    write_out(&a.output, format!("{FIT_HEADER}\n{line}\n").as_bytes())
}

fn time_grid(t0: f64, t1: f64, dt: f64) -> CliResult<Vec<f64>> {
    if !(dt > 0.0 && t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(CliError::invalid(format!("invalid time grid t0 = {t0}, t1 = {t1}, dt = {dt}")));
    }
    let steps = ((t1 - t0) / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|i| t0 + i as f64 * dt).collect())
}

fn decohere_bytes(rows: &[DecoherenceRow]) -> Vec<u8> {
    let mut out = format!("{DECOHERE_HEADER}\n");
    for r in rows {
        let cells = [r.t, r.h, r.decoherence, r.discord, r.concurrence].map(format_number);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn cmd_decohere(a: &DecohereArgs) -> CliResult<()> {
    let grid = time_grid(a.t0, a.t1, a.dt)?;
    let cfg = CentralConfig::new(a.spins, a.delta, a.tau, a.gamma, a.a, a.h_start, grid)?;
    match trace_run(&cfg) {
        Ok(trace) => {
            log::info!("max per-step norm drift {:e}", trace.max_step_drift);
            write_out(&a.output, &decohere_bytes(&trace.rows))
        }
        Err(e) => {
            write_out(&a.output, &decohere_bytes(&e.partial.rows))?;
            Err(CliError::Numerical(e.to_string()))
        }
    }
}
