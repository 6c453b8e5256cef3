//! Sweeps of the quench measures over τ or J3, log-log power-law fits and
//! peak location.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::kernels::QuenchProtocol;
use crate::quench::{measures_from_betas, quench_betas};
use crate::xstate::MeasurementFamily;

/// Quantity on the horizontal axis of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    Tau,
    J3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub tau: f64,
    pub j3: f64,
    pub n: u32,
    /// `β_0, β_2, β_4, β_6`.
    pub betas: [f64; 4],
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub concurrence: f64,
    /// Why the row could not be computed; all numeric cells are NaN then.
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(tau: f64, j3: f64, n: u32, err: &Error) -> Self {
        Self {
            tau,
            j3,
            n,
            betas: [f64::NAN; 4],
            mutual_information: f64::NAN,
            classical_correlation: f64::NAN,
            discord: f64::NAN,
            concurrence: f64::NAN,
            error: Some(err.to_string()),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.error.is_none()
    }

    pub fn value(&self, column: Column) -> f64 {
        match column {
            Column::Beta0 => self.betas[0],
            Column::MutualInformation => self.mutual_information,
            Column::Classical => self.classical_correlation,
            Column::Discord => self.discord,
            Column::Concurrence => self.concurrence,
        }
    }
}

/// Computes one row for a protocol at a single `τ`.
pub fn measure_row(protocol: &QuenchProtocol, n: u32, family: MeasurementFamily) -> SweepRow {
    let (tau, j3) = (protocol.tau(), protocol.j3());
    let result = quench_betas(protocol).and_then(|betas| {
        let report = measures_from_betas(&betas, n, family)?;
        let v = betas.values();
        Ok(SweepRow {
            tau,
            j3,
            n,
            betas: [v[0], v[1], v[2], v[3]],
            mutual_information: report.mutual_information,
            classical_correlation: report.classical_correlation,
            discord: report.discord,
            concurrence: report.concurrence,
            error: None,
        })
    });
    result.unwrap_or_else(|e| {
        log::warn!("row tau = {tau}, j3 = {j3}, n = {n} failed: {e}");
        SweepRow::failed(tau, j3, n, &e)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub abscissa: Abscissa,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Beta0,
    MutualInformation,
    Classical,
    Discord,
    Concurrence,
}

impl Column {
    /// CSV header name.
    pub fn name(self) -> &'static str {
        match self {
            Column::Beta0 => "beta0",
            Column::MutualInformation => "I",
            Column::Classical => "C",
            Column::Discord => "Q",
            Column::Concurrence => "Cnc",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            Column::Beta0,
            Column::MutualInformation,
            Column::Classical,
            Column::Discord,
            Column::Concurrence,
        ]
        .into_iter()
        .find(|c| c.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Header of a single measures row and of a τ sweep.
pub const MEASURES_HEADER: &str = "tau,n,beta0,beta2,beta4,beta6,I,C,Q,Cnc";

/// Twelve significant digits in scientific notation; `nan`/`inf` spelled out.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.11e}")
    }
}

impl SweepTable {
    pub fn abscissa_values(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match self.abscissa {
                Abscissa::Tau => r.tau,
                Abscissa::J3 => r.j3,
            })
            .collect()
    }

    pub fn column(&self, column: Column) -> Vec<f64> {
        self.rows.iter().map(|r| r.value(column)).collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_valid()).count()
    }

    pub fn header(&self) -> String {
        match self.abscissa {
            Abscissa::Tau => MEASURES_HEADER.to_string(),
            Abscissa::J3 => format!("j3,{MEASURES_HEADER}"),
        }
    }

    /// Writes a header and one line per row, `\n`-terminated.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header())?;
        for r in &self.rows {
            let mut cells = Vec::with_capacity(11);
            if self.abscissa == Abscissa::J3 {
                cells.push(format_number(r.j3));
            }
            cells.push(format_number(r.tau));
            cells.push(r.n.to_string());
            cells.extend(r.betas.iter().map(|&b| format_number(b)));
            for v in [r.mutual_information, r.classical_correlation, r.discord, r.concurrence] {
                cells.push(format_number(v));
            }
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// `points` values spaced evenly in `ln x` from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max.is_finite()) || max < min || points == 0 {
        return domain(format!("invalid log grid ({min}, {max}, {points})"));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let (a, b) = (min.ln(), max.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => min,
            i if i == points - 1 => max,
            i => (a + step * i as f64).exp(),
        })
        .collect())
}

/// `points` values spaced evenly from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || max < min || points == 0 {
        return domain(format!("invalid linear grid ({min}, {max}, {points})"));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { max } else { min + step * i as f64 })
        .collect())
}

fn check_increasing(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return domain(format!("{what} grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain(format!("{what} grid must be strictly increasing"));
    }
    Ok(())
}

/// Measures of `protocol` at every `τ` of `tau_grid`. Rows are computed in
/// parallel on the current rayon pool and returned in grid order; rows that
/// fail are kept with NaN cells.
pub fn sweep_tau(
    protocol: &QuenchProtocol,
    n: u32,
    tau_grid: &[f64],
    family: MeasurementFamily,
) -> Result<SweepTable> {
    check_increasing(tau_grid, "tau")?;
    if tau_grid[0] <= 0.0 {
        return domain("tau grid must be positive");
    }
    crate::quench::QuenchMeasureRequest::new(*protocol, n)?;
    let rows = tau_grid
        .par_iter()
        .map(|&tau| match protocol.with_tau(tau) {
            Ok(p) => measure_row(&p, n, family),
            Err(e) => SweepRow::failed(tau, protocol.j3(), n, &e),
        })
        .collect();
    Ok(SweepTable {
        abscissa: Abscissa::Tau,
        rows,
    })
}

/// Three-spin measures at fixed `τ` for every `J3` of `j3_grid`.
pub fn sweep_j3(tau: f64, n: u32, j3_grid: &[f64], family: MeasurementFamily) -> Result<SweepTable> {
    check_increasing(j3_grid, "J3")?;
    if j3_grid[0] < 0.0 {
        return domain("J3 grid must be nonnegative");
    }
    crate::quench::QuenchMeasureRequest::new(QuenchProtocol::three_spin(0.0, tau)?, n)?;
    let rows = j3_grid
        .par_iter()
        .map(|&j3| match QuenchProtocol::three_spin(j3, tau) {
            Ok(p) => measure_row(&p, n, family),
            Err(e) => SweepRow::failed(tau, j3, n, &e),
        })
        .collect();
    Ok(SweepTable {
        abscissa: Abscissa::J3,
        rows,
    })
}

pub const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

impl fmt::Display for ScalingFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "slope = {:.6}, intercept = {:.6}, r^2 = {:.6}, window = [{}, {}], points = {}",
            self.slope, self.intercept, self.r_squared, self.window.0, self.window.1, self.n_points
        )
    }
}

/// Ordinary least squares of `ln y` on `ln x` over the points with `x` in
/// `window` (inclusive). `points` are `(row index, x, y)`; indices only
/// serve the error message.
pub fn fit_points(points: &[(usize, f64, f64)], window: (f64, f64)) -> Result<ScalingFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::Fit(format!("invalid window [{lo}, {hi}]")));
    }
    let inside: Vec<_> = points.iter().filter(|p| p.1 >= lo && p.1 <= hi).collect();
    let bad: Vec<String> = inside
        .iter()
        .filter(|p| !(p.2 > 0.0) || !p.2.is_finite())
        .map(|p| format!("{} (x = {}, value = {})", p.0, p.1, p.2))
        .collect();
    if !bad.is_empty() {
        const SHOWN: usize = 8;
        let mut rows = bad.iter().take(SHOWN).cloned().collect::<Vec<_>>().join(", ");
        if bad.len() > SHOWN {
            rows.push_str(&format!(" and {} more", bad.len() - SHOWN));
        }
        return Err(Error::Fit(format!("non-positive or missing values in window at rows {rows}")));
    }
    if inside.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "{} points in window [{lo}, {hi}], need at least {MIN_FIT_POINTS}",
            inside.len()
        )));
    }
    let m = inside.len() as f64;
    let xs: Vec<f64> = inside.iter().map(|p| p.1.ln()).collect();
    let ys: Vec<f64> = inside.iter().map(|p| p.2.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae in the window coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let sse: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Ok(ScalingFit {
        slope,
        intercept,
        r_squared,
        window,
        n_points: inside.len(),
    })
}

/// Power-law fit of `column` against the table's abscissa.
pub fn fit_loglog(table: &SweepTable, column: Column, window: (f64, f64)) -> Result<ScalingFit> {
    let points: Vec<_> = table
        .abscissa_values()
        .into_iter()
        .zip(table.column(column))
        .enumerate()
        .map(|(i, (x, y))| (i, x, y))
        .collect();
    fit_points(&points, window)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub location: f64,
    pub height: f64,
    /// Index of the largest sample.
    pub index: usize,
}

/// Maximum located by a parabola through the largest sample and its two
/// neighbours, in `ln x` when `log_x` is set. A maximum at either end of
/// the grid is returned as sampled.
pub fn locate_peak(xs: &[f64], ys: &[f64], log_x: bool) -> Option<Peak> {
    if xs.len() != ys.len() || xs.is_empty() {
        return None;
    }
    let index = ys
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))?
        .0;
    let sampled = Peak {
        location: xs[index],
        height: ys[index],
        index,
    };
    if index == 0 || index + 1 == xs.len() || !ys[index - 1].is_finite() || !ys[index + 1].is_finite() {
        return Some(sampled);
    }
    let tr = |x: f64| if log_x { x.ln() } else { x };
    let (x0, x1, x2) = (tr(xs[index - 1]), tr(xs[index]), tr(xs[index + 1]));
    let (y0, y1, y2) = (ys[index - 1], ys[index], ys[index + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if !(curvature < 0.0) {
        return Some(sampled);
    }
    // y = y1 + d01 (x - x1) + curvature (x - x0)(x - x1)
    let slope_at_x1 = d01 + curvature * (x1 - x0);
    let dx = -slope_at_x1 / (2.0 * curvature);
    let xm = (x1 + dx).clamp(x0, x2);
    let ym = y1 + slope_at_x1 * (xm - x1) + curvature * (xm - x1).powi(2);
    Some(Peak {
        location: if log_x { xm.exp() } else { xm },
        height: ym,
        index,
    })
}

/// Whether `ys` rises to a single maximum and then falls, ignoring
/// reversals smaller than `tolerance` times the maximum.
pub fn is_unimodal(ys: &[f64], tolerance: f64) -> bool {
    let Some(peak) = locate_peak(&vec![0.0; ys.len()], ys, false).map(|p| p.index) else {
        return false;
    };
    let slack = tolerance * ys[peak].abs();
    let rising = ys[..=peak].windows(2).all(|w| w[1] >= w[0] - slack);
    let falling = ys[peak..].windows(2).all(|w| w[1] <= w[0] + slack);
    rising && falling
}

/// Full width of the region around the peak where `ys` stays above half
/// the peak height, linearly interpolated between samples.
pub fn half_max_width(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let peak = locate_peak(xs, ys, false)?;
    let half = 0.5 * ys[peak.index];
    let crossing = |i: usize, j: usize| {
        let t = (half - ys[i]) / (ys[j] - ys[i]);
        xs[i] + t * (xs[j] - xs[i])
    };
    let left = (0..peak.index)
        .rev()
        .find(|&i| ys[i] < half)
        .map(|i| crossing(i, i + 1))
        .unwrap_or(xs[0]);
    let right = (peak.index + 1..xs.len())
        .find(|&i| ys[i] < half)
        .map(|i| crossing(i - 1, i))
        .unwrap_or(xs[xs.len() - 1]);
    Some(right - left)
}
