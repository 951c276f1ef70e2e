//! Phase-space grids, their on-disk formats and the command implementations
//! behind the `scwigner` binary.

mod args;

use std::fs::{self, File};
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use args::run;

use crate::limits::{convergence_report, ConvergenceSchedule};
use crate::models::{Model, Oscillator, OscillatorParams};
use crate::oracle::{OracleError, VerificationReport};
use crate::suites::{run_suite, Suite, SuiteOptions};
use crate::wigner_closed::{wigner, PhasePoint};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::InvalidConfig(_) | OracleError::Domain(_) | OracleError::Model(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// A rectangular `np x nx` lattice in phase space, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
}

impl PhaseGrid {
    pub fn new(
        p_min: f64,
        p_max: f64,
        np: usize,
        x_min: f64,
        x_max: f64,
        nx: usize,
    ) -> Result<Self, CliError> {
        for (name, lo, hi) in [("p", p_min, p_max), ("x", x_min, x_max)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Usage(format!(
                    "{name} range [{lo}, {hi}] is empty or not finite"
                )));
            }
        }
        if np < 2 || nx < 2 {
            return Err(CliError::Usage(format!(
                "grid needs at least 2 points per axis, got np={np} nx={nx}"
            )));
        }
        Ok(Self {
            p_min,
            p_max,
            np,
            x_min,
            x_max,
            nx,
        })
    }

    /// `i`-th momentum node; written so that symmetric ranges give exactly
    /// symmetric nodes.
    pub fn p(&self, i: usize) -> f64 {
        lerp(self.p_min, self.p_max, i, self.np)
    }

    pub fn x(&self, j: usize) -> f64 {
        lerp(self.x_min, self.x_max, j, self.nx)
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }
}

fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    let last = (n - 1) as f64;
    (lo * (last - i as f64) + hi * i as f64) / last
}

/// Provenance written next to every grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub model: Model,
    pub n: u32,
    pub params: OscillatorParams,
    pub version: String,
    pub timestamp_unix: u64,
}

/// Wigner function sampled on a grid; `values[j][i]` is at `(p(i), x(j))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerField {
    pub grid: PhaseGrid,
    pub values: Vec<Vec<f64>>,
    pub meta: FieldMeta,
}

/// Marginal shape statistics of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStats {
    /// Skewness of the position marginal `sum_p W dp`.
    pub x_skewness: f64,
    /// `max_i |M(p_i) - M(p_{np-1-i})|` of the momentum marginal.
    pub p_asymmetry: f64,
}

impl WignerField {
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Grid point of the largest value.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let mut best = (f64::NAN, f64::NAN, f64::NEG_INFINITY);
        for (j, row) in self.values.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v > best.2 {
                    best = (self.grid.p(i), self.grid.x(j), v);
                }
            }
        }
        best
    }

    pub fn stats(&self) -> FieldStats {
        field_stats(&self.grid, |i, j| self.values[j][i])
    }
}

/// Marginal statistics from any accessor `w(i, j)` on `grid`.
pub fn field_stats(grid: &PhaseGrid, w: impl Fn(usize, usize) -> f64) -> FieldStats {
    let x_marg: Vec<f64> = (0..grid.nx)
        .map(|j| (0..grid.np).map(|i| w(i, j)).sum::<f64>() * grid.dp())
        .collect();
    let p_marg: Vec<f64> = (0..grid.np)
        .map(|i| (0..grid.nx).map(|j| w(i, j)).sum::<f64>() * grid.dx())
        .collect();
    let mass: f64 = x_marg.iter().sum();
    let mean = (0..grid.nx).map(|j| grid.x(j) * x_marg[j]).sum::<f64>() / mass;
    let moment = |k: i32| {
        (0..grid.nx)
            .map(|j| (grid.x(j) - mean).powi(k) * x_marg[j])
            .sum::<f64>()
            / mass
    };
    let x_skewness = moment(3) / moment(2).powf(1.5);
    let p_asymmetry = (0..grid.np)
        .map(|i| (p_marg[i] - p_marg[grid.np - 1 - i]).abs())
        .fold(0.0f64, f64::max);
    FieldStats {
        x_skewness,
        p_asymmetry,
    }
}

/// Evaluates the closed form on `grid`, one x-row per task.
pub fn evaluate_field(model: Model, n: u32, osc: &Oscillator, grid: PhaseGrid) -> WignerField {
    let values = (0..grid.nx)
        .into_par_iter()
        .map(|j| {
            let x = grid.x(j);
            (0..grid.np)
                .map(|i| wigner(model, n, PhasePoint::new(grid.p(i), x), osc))
                .collect()
        })
        .collect();
    WignerField {
        grid,
        values,
        meta: FieldMeta {
            model,
            n,
            params: *osc.params(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        },
    }
}

fn check_finite(field: &WignerField) -> Result<(), CliError> {
    for (j, row) in field.values.iter().enumerate() {
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Numerical(format!(
                "non-finite Wigner value at p = {}, x = {}",
                field.grid.p(i),
                field.grid.x(j)
            )));
        }
    }
    Ok(())
}

/// Writes `p,x,w` rows, x-major, with shortest round-trip number formatting.
pub fn write_csv(field: &WignerField, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "p,x,w")?;
    for (j, row) in field.values.iter().enumerate() {
        let x = field.grid.x(j);
        for (i, w) in row.iter().enumerate() {
            writeln!(out, "{:?},{:?},{:?}", field.grid.p(i), x, w)?;
        }
    }
    Ok(())
}

/// Parses the output of [`write_csv`].
pub fn read_csv(input: impl BufRead) -> Result<Vec<[f64; 3]>, CliError> {
    let mut lines = input.lines();
    let bad = |msg: String| CliError::Usage(format!("malformed CSV: {msg}"));
    match lines.next() {
        Some(Ok(h)) if h == "p,x,w" => {}
        other => return Err(bad(format!("unexpected header {other:?}"))),
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.map_err(|e| bad(e.to_string()))?;
        let mut row = [0.0; 3];
        let mut fields = line.split(',');
        for slot in &mut row {
            let f = fields
                .next()
                .ok_or_else(|| bad(format!("line {}: too few fields", k + 2)))?;
            *slot = f
                .parse()
                .map_err(|_| bad(format!("line {}: bad number `{f}`", k + 2)))?;
        }
        if fields.next().is_some() {
            return Err(bad(format!("line {}: too many fields", k + 2)));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::io(path, io::Error::other(e)))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

/// `panel.csv` -> `panel.meta.json`.
pub fn sidecar_path(data: &Path) -> PathBuf {
    data.with_extension("meta.json")
}

/// Writes a field; returns the files created.
pub fn write_field(
    field: &WignerField,
    format: OutputFormat,
    out: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    check_finite(field)?;
    match format {
        OutputFormat::Csv => {
            let mut w = create(out)?;
            write_csv(field, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(out, e))?;
            let meta = sidecar_path(out);
            #[derive(Serialize)]
            struct Sidecar<'a> {
                meta: &'a FieldMeta,
                grid: &'a PhaseGrid,
            }
            write_json(
                &meta,
                &Sidecar {
                    meta: &field.meta,
                    grid: &field.grid,
                },
            )?;
            Ok(vec![out.to_owned(), meta])
        }
        OutputFormat::Json => {
            write_json(out, field)?;
            Ok(vec![out.to_owned()])
        }
    }
}

/// Evaluates and writes one grid.
pub fn cmd_grid(
    model: Model,
    n: u32,
    params: OscillatorParams,
    grid: PhaseGrid,
    format: OutputFormat,
    out: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let osc = Oscillator::new(params).map_err(|e| CliError::Usage(e.to_string()))?;
    write_field(&evaluate_field(model, n, &osc, grid), format, out)
}

/// Default figure window.
pub fn fig1_grid() -> PhaseGrid {
    PhaseGrid::new(-3.0, 3.0, 121, -3.0, 3.0, 121).expect("static grid is valid")
}

/// File stem of one figure panel.
pub fn fig1_panel_name(a: Option<f64>, g: f64) -> String {
    match a {
        Some(a) => format!("fig1_a{a}_g{g}"),
        None => format!("fig1_canonical_g{g}"),
    }
}

/// Ground-state panels for `a in {2, 4}` and the canonical limit, each at
/// `g in {0, 2, 4}`.
pub fn cmd_fig1(
    base: OscillatorParams,
    grid: PhaseGrid,
    format: OutputFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let mut files = Vec::new();
    for a in [Some(2.0), Some(4.0), None] {
        for g in [0.0, 2.0, 4.0] {
            let (model, a_value) = match a {
                Some(a) => (Model::Semiconfined, a),
                None => (Model::Canonical, base.a),
            };
            let params = OscillatorParams {
                a: a_value,
                g,
                ..base
            };
            let path = dir.join(format!("{}.{ext}", fig1_panel_name(a, g)));
            files.extend(cmd_grid(model, 0, params, grid, format, &path)?);
        }
    }
    Ok(files)
}

/// Runs the selected suites and writes all reports to `out`; `Ok(true)` iff
/// every check passed.
pub fn cmd_verify(
    suites: &[Suite],
    opts: &SuiteOptions,
    out: &Path,
    mut log: impl Write,
) -> Result<bool, CliError> {
    let mut reports: Vec<VerificationReport> = Vec::new();
    for &suite in suites {
        let report = run_suite(suite, opts)?;
        let status = if report.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            log,
            "{status} {:<15} {} checks, worst measured {:e}",
            suite.name(),
            report.checks.len(),
            report.worst()
        );
        for f in report.failures() {
            let _ = writeln!(
                log,
                "    {} [{}]: measured {:e} vs tolerance {:e}",
                f.name, f.inputs, f.measured, f.tolerance
            );
        }
        for note in &report.notes {
            let _ = writeln!(log, "    note: {note}");
        }
        reports.push(report);
    }
    write_json(out, &reports)?;
    Ok(reports.iter().all(VerificationReport::passed))
}

/// Parameters of a convergence study.
#[derive(Debug, Clone)]
pub struct LimitStudy {
    pub n: u32,
    pub g: f64,
    pub a_values: Vec<f64>,
    pub grid: PhaseGrid,
    /// Mass, frequency and `hbar`; `a` and `g` are overridden.
    pub base: OscillatorParams,
    /// Largest acceptable error at the last confinement length.
    pub threshold: f64,
}

/// Limit study along `a_values`; writes the report if `out` is given.
pub fn cmd_limit(
    study: LimitStudy,
    out: Option<&Path>,
    mut log: impl Write,
) -> Result<bool, CliError> {
    let sched = ConvergenceSchedule::new(study.a_values, study.grid, study.n, study.g)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = convergence_report(&sched, &study.base, study.threshold)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let _ = writeln!(log, "{:>10} {:>14} {:>8}", "a", "sup_error", "rate");
    for rec in report.checks.iter().filter(|r| r.name == "sup_error") {
        let rate = rec
            .extra
            .get("rate")
            .map_or_else(|| "-".to_owned(), |r| format!("{r:.3}"));
        let _ = writeln!(
            log,
            "{:>10} {:>14.6e} {:>8}",
            rec.extra["a"], rec.measured, rate
        );
    }
    let _ = writeln!(log, "{}", if report.passed() { "PASS" } else { "FAIL" });
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(report.passed())
}
