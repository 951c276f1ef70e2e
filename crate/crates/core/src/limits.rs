//! Recovery of the canonical Wigner functions as the wall recedes (`a -> inf`),
//! measured directly as a sup-norm distance on a fixed phase-space window.

use std::cmp::Ordering;

use rayon::prelude::*;
use thiserror::Error;

use crate::cli::PhaseGrid;
use crate::models::{ModelError, Oscillator, OscillatorParams};
use crate::oracle::{CheckRecord, VerificationReport};
use crate::wigner_closed::{wigner_canonical, wigner_semiconfined, PhasePoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitsError {
    #[error("confinement lengths must be strictly increasing, got {0:?}")]
    NotIncreasing(Vec<f64>),
    #[error("a = {a} does not keep the wall outside the window (max |x| = {reach})")]
    WallInsideWindow { a: f64, reach: f64 },
    #[error("schedule needs at least one confinement length")]
    Empty,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A sequence of confinement lengths at which the distance is measured.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSchedule {
    a_values: Vec<f64>,
    grid: PhaseGrid,
    n: u32,
    g: f64,
}

impl ConvergenceSchedule {
    pub fn new(a_values: Vec<f64>, grid: PhaseGrid, n: u32, g: f64) -> Result<Self, LimitsError> {
        if a_values.is_empty() {
            return Err(LimitsError::Empty);
        }
        if a_values
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        {
            return Err(LimitsError::NotIncreasing(a_values));
        }
        let reach = grid.x_min.abs().max(grid.x_max.abs());
        if let Some(&a) = a_values
            .iter()
            .find(|&&a| a.partial_cmp(&reach) != Some(Ordering::Greater))
        {
            return Err(LimitsError::WallInsideWindow { a, reach });
        }
        Ok(Self {
            a_values,
            grid,
            n,
            g,
        })
    }

    pub fn a_values(&self) -> &[f64] {
        &self.a_values
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

/// `sup |W_sc(p, x; a) - W_canonical(p, x)|` over the grid, both from the closed forms.
///
/// `NaN` if any evaluation is non-finite.
pub fn limit_error(
    n: u32,
    g: f64,
    a: f64,
    grid: &PhaseGrid,
    base: &OscillatorParams,
) -> Result<f64, ModelError> {
    let osc = Oscillator::new(OscillatorParams { a, g, ..*base })?;
    let row_sup = |j: usize| {
        let x = grid.x(j);
        (0..grid.np).fold(0.0f64, |m, i| {
            let pt = PhasePoint::new(grid.p(i), x);
            let d = (wigner_semiconfined(n, pt, &osc) - wigner_canonical(n, pt, &osc)).abs();
            if d.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(d)
            }
        })
    };
    let rows: Vec<f64> = (0..grid.nx).into_par_iter().map(row_sup).collect();
    Ok(rows.iter().fold(0.0f64, |m, &r| {
        if r.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(r)
        }
    }))
}

/// Error table along the schedule.
///
/// One `sup_error` record per `a` (passing iff strictly below the previous
/// entry; `extra.rate = log2(err(a)/err(2a))` when `2a` is also scheduled) and a
/// `final_error` record against `threshold`.
pub fn convergence_report(
    schedule: &ConvergenceSchedule,
    base: &OscillatorParams,
    threshold: f64,
) -> Result<VerificationReport, ModelError> {
    let (n, g) = (schedule.n, schedule.g);
    let errors = schedule
        .a_values
        .iter()
        .map(|&a| limit_error(n, g, a, &schedule.grid, base))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = VerificationReport::new("limits");
    let mut previous = f64::INFINITY;
    for (i, (&a, &err)) in schedule.a_values.iter().zip(&errors).enumerate() {
        let mut rec = CheckRecord::new("sup_error", format!("n={n} g={g} a={a}"), err, previous);
        rec.passed = err < previous;
        rec = rec.with_extra("a", a);
        if let Some(j) = schedule.a_values[i + 1..]
            .iter()
            .position(|&b| b == 2.0 * a)
        {
            rec = rec.with_extra("rate", (err / errors[i + 1 + j]).log2());
        }
        report.push(rec);
        previous = err;
    }
    let last_a = *schedule.a_values.last().expect("schedule is non-empty");
    report.push(CheckRecord::new(
        "final_error",
        format!("n={n} g={g} a={last_a}"),
        previous,
        threshold,
    ));
    Ok(report)
}
