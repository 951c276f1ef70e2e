//! Verification batteries shared by the `verify` command and the test suite.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cli::{evaluate_field, FieldStats, PhaseGrid};
use crate::limits::{convergence_report, limit_error, ConvergenceSchedule};
use crate::models::{psi, Model, Oscillator, OscillatorParams};
use crate::oracle::{
    check_laguerre_product, check_table_integral, momentum_marginal, normalization_2d,
    orthonormality_matrix, position_marginal, wigner_quadrature_canonical,
    wigner_quadrature_semiconfined, CheckRecord, OracleError, QuadConfig, VerificationReport,
};
use crate::wigner_closed::{wigner_canonical, wigner_semiconfined, PhasePoint};

/// Published ground-state value at the phase-space origin for `a = 1`, `g = 0`.
pub const GROUND_SPOT_VALUE: f64 = 0.2297530;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Identities,
    Equivalence,
    Canonical,
    Normalization,
    Marginal,
    Bound,
    Orthonormality,
    Limits,
    Spot,
    Negativity,
    Figure,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Identities,
        Suite::Equivalence,
        Suite::Canonical,
        Suite::Normalization,
        Suite::Marginal,
        Suite::Bound,
        Suite::Orthonormality,
        Suite::Limits,
        Suite::Spot,
        Suite::Negativity,
        Suite::Figure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Equivalence => "equivalence",
            Suite::Canonical => "canonical",
            Suite::Normalization => "normalization",
            Suite::Marginal => "marginal",
            Suite::Bound => "bound",
            Suite::Orthonormality => "orthonormality",
            Suite::Limits => "limits",
            Suite::Spot => "spot",
            Suite::Negativity => "negativity",
            Suite::Figure => "figure",
        }
    }

    /// Parses a selector: a single suite name or `all`.
    pub fn select(name: &str) -> Result<Vec<Suite>, String> {
        if name == "all" {
            Ok(Suite::ALL.to_vec())
        } else {
            name.parse().map(|s| vec![s])
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite `{s}` (expected all, {})", names.join(", "))
            })
    }
}

/// Knobs shared by all suites. `tol` replaces each suite's primary tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SuiteOptions {
    pub tol: Option<f64>,
}

impl SuiteOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    match suite {
        Suite::Identities => identities(opts),
        Suite::Equivalence => equivalence(opts),
        Suite::Canonical => canonical(opts),
        Suite::Normalization => normalization(opts),
        Suite::Marginal => marginal(opts),
        Suite::Bound => bound(opts),
        Suite::Orthonormality => orthonormality(opts),
        Suite::Limits => limits(opts),
        Suite::Spot => spot(opts),
        Suite::Negativity => negativity(opts),
        Suite::Figure => figure(opts),
    }
}

fn unit(a: f64, g: f64) -> Result<Oscillator, OracleError> {
    Ok(Oscillator::new(OscillatorParams::unit(a, g))?)
}

fn collect(
    suite: &str,
    chunks: Vec<Result<Vec<CheckRecord>, OracleError>>,
) -> Result<VerificationReport, OracleError> {
    let mut report = VerificationReport::new(suite);
    for chunk in chunks {
        for rec in chunk? {
            report.push(rec);
        }
    }
    Ok(report)
}

/// `|closed - oracle| / max(|oracle|, floor / rel)`: at most `rel` exactly when
/// `|closed - oracle| <= max(rel |oracle|, floor)`.
fn scaled_error(closed: f64, oracle: f64, rel: f64, floor: f64) -> f64 {
    (closed - oracle).abs() / oracle.abs().max(floor / rel)
}

fn table_integral_records(tol: f64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for aa in [1.0, 2.0] {
        for beta in [1.0, 1.5, 3.2] {
            for lam in [0.5, 1.5, 4.0] {
                let inputs = format!("aa={aa} beta={beta} lambda={lam}");
                match check_table_integral(aa, beta, lam) {
                    Ok((lhs, rhs)) => {
                        out.push(CheckRecord::new(
                            "table_integral",
                            inputs.clone(),
                            (lhs.re - rhs).abs(),
                            tol,
                        ));
                        out.push(CheckRecord::new(
                            "table_integral_imag",
                            inputs,
                            lhs.im.abs(),
                            tol,
                        ));
                    }
                    Err(_) => out.push(CheckRecord::failed("table_integral", inputs, tol)),
                }
            }
        }
    }
    out
}

fn laguerre_product_records(tol: f64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for n in 0..=8u32 {
        for alpha in [0.5, 2.0, 8.0, 32.0] {
            for x in [0.3, 1.1, 3.3] {
                for y in [0.3, 1.1, 3.3] {
                    let inputs = format!("n={n} alpha={alpha} x={x} y={y}");
                    let rec = match check_laguerre_product(n, alpha, x, y) {
                        Ok((l, r)) => CheckRecord::new(
                            "laguerre_product",
                            inputs,
                            (l - r).abs() / l.abs().max(1.0),
                            tol,
                        ),
                        Err(_) => CheckRecord::failed("laguerre_product", inputs, tol),
                    };
                    out.push(rec);
                }
            }
        }
    }
    out
}

/// Table-integral and Laguerre-product identities.
pub fn identities(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let tol = opts.tol(1e-10);
    let mut report = VerificationReport::new("identities");
    table_integral_records(tol)
        .into_iter()
        .chain(laguerre_product_records(tol))
        .for_each(|r| report.push(r));
    Ok(report)
}

/// `(p, x)` nodes of the 21x21 equivalence window for confinement `a`.
pub fn equivalence_grid(a: f64) -> PhaseGrid {
    PhaseGrid::new(-4.0, 4.0, 21, -a + 0.05, 6.0, 21).expect("static grid is valid")
}

struct Agreement {
    worst: f64,
    worst_imag: f64,
    peak: f64,
}

fn agreement_on_grid(
    grid: &PhaseGrid,
    rel: f64,
    closed: impl Fn(PhasePoint) -> f64 + Sync,
    oracle: impl Fn(PhasePoint) -> Result<crate::oracle::ComplexValue, OracleError> + Sync,
) -> Result<Agreement, OracleError> {
    let rows: Vec<Result<Agreement, OracleError>> = (0..grid.nx)
        .into_par_iter()
        .map(|j| {
            let mut acc = Agreement {
                worst: 0.0,
                worst_imag: 0.0,
                peak: 0.0,
            };
            for i in 0..grid.np {
                let pt = PhasePoint::new(grid.p(i), grid.x(j));
                let c = closed(pt);
                let o = oracle(pt)?;
                let e = scaled_error(c, o.re, rel, 1e-12);
                acc.worst = if e.is_nan() {
                    f64::NAN
                } else {
                    acc.worst.max(e)
                };
                acc.worst_imag = acc.worst_imag.max(o.im.abs() / (1.0 + o.re.abs()));
                acc.peak = acc.peak.max(c.abs());
            }
            Ok(acc)
        })
        .collect();
    let mut total = Agreement {
        worst: 0.0,
        worst_imag: 0.0,
        peak: 0.0,
    };
    for r in rows {
        let r = r?;
        total.worst = if r.worst.is_nan() || total.worst.is_nan() {
            f64::NAN
        } else {
            total.worst.max(r.worst)
        };
        total.worst_imag = total.worst_imag.max(r.worst_imag);
        total.peak = total.peak.max(r.peak);
    }
    Ok(total)
}

/// Closed-form semiconfined Wigner functions against the truncated-integral oracle.
pub fn equivalence(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let rel = opts.tol(1e-8);
    let q = QuadConfig::default();
    let mut configs = Vec::new();
    for n in [0u32, 1, 2, 3, 5] {
        for a in [1.0, 2.0, 4.0] {
            for g in [0.0, 2.0, 4.0] {
                configs.push((n, a, g));
            }
        }
    }
    let chunks = configs
        .par_iter()
        .map(|&(n, a, g)| {
            let osc = unit(a, g)?;
            let grid = equivalence_grid(a);
            let agr = agreement_on_grid(
                &grid,
                rel,
                |pt| wigner_semiconfined(n, pt, &osc),
                |pt| wigner_quadrature_semiconfined(n, pt, &osc, &q),
            )?;
            let inputs = format!("n={n} a={a} g={g}");
            Ok(vec![
                CheckRecord::new("closed_vs_oracle", inputs.clone(), agr.worst, rel),
                CheckRecord::new("oracle_imaginary", inputs.clone(), agr.worst_imag, 1e-10),
                CheckRecord::new("bound", inputs, agr.peak * PI, 1.0 + 1e-9),
            ])
        })
        .collect();
    collect("equivalence", chunks)
}

/// Canonical closed form against the oracle.
pub fn canonical(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let rel = opts.tol(1e-8);
    let q = QuadConfig::default();
    let grid = PhaseGrid::new(-4.0, 4.0, 21, -4.0, 4.0, 21).expect("static grid is valid");
    let configs: Vec<(u32, f64)> = (0..=5u32).flat_map(|n| [(n, 0.0), (n, 2.0)]).collect();
    let chunks = configs
        .par_iter()
        .map(|&(n, g)| {
            let osc = unit(1.0, g)?;
            let agr = agreement_on_grid(
                &grid,
                rel,
                |pt| wigner_canonical(n, pt, &osc),
                |pt| wigner_quadrature_canonical(n, pt, &osc, &q),
            )?;
            let inputs = format!("n={n} g={g}");
            Ok(vec![
                CheckRecord::new("closed_vs_oracle", inputs.clone(), agr.worst, rel),
                CheckRecord::new("oracle_imaginary", inputs.clone(), agr.worst_imag, 1e-10),
                CheckRecord::new("bound", inputs, agr.peak * PI, 1.0 + 1e-9),
            ])
        })
        .collect();
    collect("canonical", chunks)
}

const PHASE_SPACE_CONFIGS: [(f64, f64); 3] = [(2.0, 0.0), (2.0, 2.0), (4.0, 4.0)];

fn model_configs() -> Vec<(Model, u32, f64, f64)> {
    let mut out = Vec::new();
    for model in [Model::Semiconfined, Model::Canonical] {
        for (a, g) in PHASE_SPACE_CONFIGS {
            for n in 0..=3u32 {
                out.push((model, n, a, g));
            }
        }
    }
    out
}

/// `int int W dp dx = 1` for both models.
pub fn normalization(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let tol = opts.tol(1e-6);
    let q = QuadConfig {
        abs_tol: 1e-7,
        rel_tol: 1e-10,
        ..QuadConfig::default()
    };
    let chunks = model_configs()
        .par_iter()
        .map(|&(model, n, a, g)| {
            let v = normalization_2d(n, &unit(a, g)?, model, &q)?;
            Ok(vec![CheckRecord::new(
                "normalization",
                format!("model={model} n={n} a={a} g={g}"),
                (v - 1.0).abs(),
                tol,
            )
            .with_extra("integral", v)])
        })
        .collect();
    collect("normalization", chunks)
}

/// Nine sample positions spread over the bulk of the state.
pub fn marginal_positions(model: Model, osc: &Oscillator) -> Vec<f64> {
    match model {
        Model::Semiconfined => {
            let a = osc.params().a;
            (0..9)
                .map(|k| -a + (f64::from(k) + 0.5) * (6.0 + a) / 9.0)
                .collect()
        }
        Model::Canonical => {
            let center = -osc.derived().x0;
            let width = 1.0 / osc.derived().lambda0;
            (0..9)
                .map(|k| center + width * (f64::from(k) - 4.0) * 0.75)
                .collect()
        }
    }
}

/// Momenta at which the momentum marginal is sampled.
pub const MOMENTUM_SAMPLES: [f64; 6] = [0.0, 0.5, 1.0, 1.5, 2.5, 4.0];

/// `int W dp = |psi(x)|^2` at sampled positions; `int W dx >= 0` at sampled momenta.
pub fn marginal(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let tol = opts.tol(1e-6);
    let q = QuadConfig {
        abs_tol: 1e-8,
        rel_tol: 1e-10,
        ..QuadConfig::default()
    };
    let chunks = model_configs()
        .par_iter()
        .map(|&(model, n, a, g)| {
            let osc = unit(a, g)?;
            let mut worst = 0.0f64;
            for x in marginal_positions(model, &osc) {
                let m = position_marginal(n, x, &osc, model, &q)?;
                worst = worst.max((m - psi(model, n, x, &osc).powi(2)).abs());
            }
            let mut lowest = f64::INFINITY;
            for p in MOMENTUM_SAMPLES {
                lowest = lowest.min(momentum_marginal(n, p, &osc, model, &q)?);
            }
            let inputs = format!("model={model} n={n} a={a} g={g}");
            Ok(vec![
                CheckRecord::new("position_marginal", inputs.clone(), worst, tol),
                CheckRecord::new(
                    "momentum_marginal_nonnegative",
                    inputs,
                    (-lowest).max(0.0),
                    q.abs_tol,
                )
                .with_extra("min", lowest),
            ])
        })
        .collect();
    collect("marginal", chunks)
}

/// `max |W| pi hbar <= 1 + 1e-9` over dense grids for `n <= 6`.
pub fn bound(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let tol = 1.0 + opts.tol(1e-9);
    let mut configs = Vec::new();
    for n in 0..=6u32 {
        for a in [1.0, 2.0, 4.0] {
            for g in [0.0, 2.0, 4.0] {
                configs.push((Model::Semiconfined, n, a, g));
            }
        }
        for g in [0.0, 2.0, 4.0] {
            configs.push((Model::Canonical, n, 1.0, g));
        }
    }
    let chunks = configs
        .par_iter()
        .map(|&(model, n, a, g)| {
            let osc = unit(a, g)?;
            let grid = PhaseGrid::new(-5.0, 5.0, 81, -a.min(6.0), 6.0, 81).expect("static grid");
            let field = evaluate_field(model, n, &osc, grid);
            let peak = field.max_abs() * PI * osc.params().hbar;
            Ok(vec![CheckRecord::new(
                "bound",
                format!("model={model} n={n} a={a} g={g}"),
                peak,
                tol,
            )])
        })
        .collect();
    collect("bound", chunks)
}

/// Gram matrices of the stationary states.
pub fn orthonormality(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let tol = opts.tol(1e-8);
    let q = QuadConfig::default();
    let mut configs = Vec::new();
    for model in [Model::Semiconfined, Model::Canonical] {
        for (a, g) in [(1.0, 0.0), (2.0, 2.0), (4.0, 4.0)] {
            configs.push((model, a, g));
        }
    }
    let chunks = configs
        .par_iter()
        .map(|&(model, a, g)| {
            let gram = orthonormality_matrix(6, &unit(a, g)?, model, &q)?;
            let worst = gram
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(j, v)| (v - f64::from(u8::from(i == j))).abs())
                })
                .fold(0.0f64, f64::max);
            Ok(vec![CheckRecord::new(
                "gram_matrix",
                format!("model={model} nmax=6 a={a} g={g}"),
                worst,
                tol,
            )])
        })
        .collect();
    collect("orthonormality", chunks)
}

/// Window used for the limit study.
pub fn limit_grid() -> PhaseGrid {
    PhaseGrid::new(-3.0, 3.0, 61, -3.0, 3.0, 61).expect("static grid is valid")
}

pub const LIMIT_SCHEDULE: [f64; 4] = [5.0, 10.0, 20.0, 40.0];

/// Convergence to the canonical functions as `a` grows.
pub fn limits(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let threshold = opts.tol(0.02);
    let base = OscillatorParams::unit(1.0, 0.0);
    let mut report = VerificationReport::new("limits");
    for n in 0..=3u32 {
        for g in [0.0, 2.0] {
            let sched = ConvergenceSchedule::new(LIMIT_SCHEDULE.to_vec(), limit_grid(), n, g)
                .map_err(|e| OracleError::Domain(e.to_string()))?;
            for rec in convergence_report(&sched, &base, threshold)?.checks {
                report.push(rec);
            }
        }
    }
    // s = 1600: the log-space assembly must not overflow.
    let mut bad = 0usize;
    for n in 0..=3u32 {
        for g in [0.0, 2.0] {
            if !limit_error(n, g, 40.0, &limit_grid(), &base)?.is_finite() {
                bad += 1;
            }
        }
    }
    report.push(CheckRecord::new(
        "finite_at_a40",
        "n<=3 g in {0,2}",
        bad as f64,
        0.0,
    ));
    Ok(report)
}

/// Ground-state value at the origin for `a = 1`, `g = 0`.
pub fn spot(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let tol = opts.tol(1e-6);
    let osc = unit(1.0, 0.0)?;
    let pt = PhasePoint::new(0.0, 0.0);
    let closed = wigner_semiconfined(0, pt, &osc);
    let oracle = wigner_quadrature_semiconfined(0, pt, &osc, &QuadConfig::default())?;
    let mut report = VerificationReport::new("spot");
    report.push(
        CheckRecord::new(
            "ground_spot",
            "n=0 a=1 g=0 p=0 x=0",
            (closed - GROUND_SPOT_VALUE).abs(),
            tol,
        )
        .with_extra("value", closed),
    );
    report.push(CheckRecord::new(
        "ground_spot_oracle",
        "n=0 a=1 g=0 p=0 x=0",
        (closed - oracle.re).abs() / oracle.re.abs(),
        1e-8,
    ));
    Ok(report)
}

/// Location and value of the global minimum of `W` on a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub p: f64,
    pub x: f64,
    pub value: f64,
}

/// Grid scan followed by a shrinking compass search.
pub fn locate_minimum(
    f: impl Fn(f64, f64) -> f64 + Sync,
    grid: &PhaseGrid,
    x_floor: f64,
) -> Minimum {
    let rows: Vec<Minimum> = (0..grid.nx)
        .into_par_iter()
        .map(|j| {
            let x = grid.x(j);
            (0..grid.np)
                .map(|i| Minimum {
                    p: grid.p(i),
                    x,
                    value: f(grid.p(i), x),
                })
                .fold(
                    Minimum {
                        p: 0.0,
                        x,
                        value: f64::INFINITY,
                    },
                    |m, c| if c.value < m.value { c } else { m },
                )
        })
        .collect();
    let mut best = rows.into_iter().fold(
        Minimum {
            p: 0.0,
            x: 0.0,
            value: f64::INFINITY,
        },
        |m, c| if c.value < m.value { c } else { m },
    );
    let clamp = |p: f64, x: f64| {
        (
            p.clamp(grid.p_min, grid.p_max),
            x.clamp(x_floor.max(grid.x_min), grid.x_max),
        )
    };
    let mut step = [
        (grid.p_max - grid.p_min) / (grid.np - 1) as f64,
        (grid.x_max - grid.x_min) / (grid.nx - 1) as f64,
    ];
    while step[0] > 1e-12 || step[1] > 1e-12 {
        let mut moved = false;
        for (dp, dx) in [
            (step[0], 0.0),
            (-step[0], 0.0),
            (0.0, step[1]),
            (0.0, -step[1]),
        ] {
            let (p, x) = clamp(best.p + dp, best.x + dx);
            let v = f(p, x);
            if v < best.value {
                best = Minimum { p, x, value: v };
                moved = true;
            }
        }
        if !moved {
            step = [0.5 * step[0], 0.5 * step[1]];
        }
    }
    best
}

/// Global minimum of the semiconfined ground state for `a = 2`, `g = 0`,
/// compared with the oracle at the minimiser.
pub fn negativity(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let rel = opts.tol(1e-8);
    let a = 2.0;
    let osc = unit(a, 0.0)?;
    let grid = PhaseGrid::new(-8.0, 8.0, 161, -a, 6.0, 161).expect("static grid");
    let min = locate_minimum(
        |p, x| wigner_semiconfined(0, PhasePoint::new(p, x), &osc),
        &grid,
        -a,
    );
    let pt = PhasePoint::new(min.p, min.x);
    let oracle = wigner_quadrature_semiconfined(0, pt, &osc, &QuadConfig::default())?;
    let mut report = VerificationReport::new("negativity");
    report.push(
        CheckRecord::new(
            "minimum_closed_vs_oracle",
            "n=0 a=2 g=0 p in [-8,8] x in (-2,6]",
            (min.value - oracle.re).abs() / oracle.re.abs(),
            rel,
        )
        .with_extra("min_value", min.value)
        .with_extra("oracle_value", oracle.re)
        .with_extra("p", min.p)
        .with_extra("x", min.x),
    );
    report.note(if min.value < 0.0 {
        format!(
            "positivity of the ground state is refuted: W_0 = {:e} at (p, x) = ({}, {})",
            min.value, min.p, min.x
        )
    } else {
        format!(
            "ground state observed non-negative; minimum {:e}",
            min.value
        )
    });
    Ok(report)
}

/// The `a = 2`, `g = 0` ground-state panel of the figure grid.
pub fn figure_panel_stats() -> Result<FieldStats, OracleError> {
    let osc = unit(2.0, 0.0)?;
    let field = evaluate_field(Model::Semiconfined, 0, &osc, crate::cli::fig1_grid());
    Ok(field.stats())
}

/// Shape of the ground-state panel: skewed in `x`, symmetric in `p`.
pub fn figure(opts: &SuiteOptions) -> Result<VerificationReport, OracleError> {
    let stats = figure_panel_stats()?;
    let mut report = VerificationReport::new("figure");
    let mut skew = CheckRecord::new("x_marginal_skewness", "n=0 a=2 g=0", stats.x_skewness, 0.0)
        .with_extra("skewness", stats.x_skewness);
    skew.passed = stats.x_skewness > 0.0;
    report.push(skew);
    report.push(CheckRecord::new(
        "p_marginal_asymmetry",
        "n=0 a=2 g=0",
        stats.p_asymmetry,
        opts.tol(1e-10),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::select("all").unwrap().len(), 11);
        assert!(Suite::select("bogus").is_err());
    }

    #[test]
    fn scaled_error_matches_mixed_tolerance() {
        assert!(scaled_error(1.0 + 0.9e-8, 1.0, 1e-8, 1e-12) <= 1e-8);
        assert!(scaled_error(1.0 + 1.1e-8, 1.0, 1e-8, 1e-12) > 1e-8);
        assert!(scaled_error(0.9e-12, 0.0, 1e-8, 1e-12) <= 1e-8);
        assert!(scaled_error(1.1e-12, 0.0, 1e-8, 1e-12) > 1e-8);
    }

    #[test]
    fn compass_search_finds_quadratic_minimum() {
        let grid = PhaseGrid::new(-2.0, 2.0, 9, -2.0, 2.0, 9).unwrap();
        let m = locate_minimum(
            |p, x| (p - 0.123).powi(2) + (x + 0.456).powi(2),
            &grid,
            -2.0,
        );
        assert!((m.p - 0.123).abs() < 1e-11 && (m.x + 0.456).abs() < 1e-11);
        assert!(m.value < 1e-22);
    }

    #[test]
    fn spot_suite_passes() {
        assert!(spot(&SuiteOptions::default()).unwrap().passed());
    }

    #[test]
    fn identities_suite_passes() {
        let r = identities(&SuiteOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn tolerance_override_applies() {
        let r = spot(&SuiteOptions { tol: Some(1e-12) }).unwrap();
        assert!(!r.passed());
    }
}
