//! Brute-force reference values.
//!
//! The Wigner integral is evaluated directly from the wavefunctions in
//! [`crate::models`], which are exactly zero beyond the wall, so nothing here
//! shares a code path with [`crate::wigner_closed`]. For the semiconfined model
//! the shift integral runs only over `|y| <= x + a`, where both factors live.
//! Semi-infinite integrals are cut where the exponential envelope drops below
//! `QuadConfig::tail_cutoff` of its peak.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{psi, psi_canonical, psi_semiconfined, Model, ModelError, Oscillator};
use crate::quad::{self, GaussLegendre, Tolerance};
use crate::specfun::{
    laguerre_raw, lgamma, ln_factorial, scaled_bessel_product, PolyIndex, RealOrder, SpecFunError,
};
use crate::wigner_closed::{semiconfined_momentum_tail_bound, wigner, PhasePoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "{what}: quadrature did not converge within {panels} panels (error estimate {error:e})"
    )]
    QuadratureFailure {
        what: &'static str,
        error: f64,
        panels: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("closed-form evaluation returned a non-finite value at p = {p}, x = {x}")]
    NonFinite { p: f64, x: f64 },
}

/// Quadrature settings shared by all oracle operations.
///
/// `tail_cutoff` is the fraction of the envelope peak below which
/// semi-infinite domains are truncated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub nodes_per_panel: usize,
    pub max_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub tail_cutoff: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            nodes_per_panel: 32,
            max_panels: 4096,
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            tail_cutoff: 1e-18,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |msg: String| Err(OracleError::InvalidConfig(msg));
        if self.nodes_per_panel < 8 {
            return bad(format!(
                "nodes_per_panel must be >= 8, got {}",
                self.nodes_per_panel
            ));
        }
        if self.max_panels == 0 {
            return bad("max_panels must be positive".into());
        }
        for (name, v) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be finite and positive, got {v}"));
            }
        }
        if !(self.tail_cutoff > 0.0 && self.tail_cutoff < 1.0) {
            return bad(format!(
                "tail_cutoff must lie in (0, 1), got {}",
                self.tail_cutoff
            ));
        }
        Ok(())
    }

    fn tolerance(&self, abs: f64) -> Tolerance {
        Tolerance {
            abs,
            rel: self.rel_tol,
            max_panels: self.max_panels,
        }
    }

    /// Envelope decay, in units of the Gaussian width, that reaches `tail_cutoff`.
    fn gaussian_reach(&self) -> f64 {
        (-self.tail_cutoff.ln()).sqrt()
    }
}

/// A complex quadrature result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub const ZERO: ComplexValue = ComplexValue { re: 0.0, im: 0.0 };
}

fn rule(nodes: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    Arc::clone(
        map.entry(nodes)
            .or_insert_with(|| Arc::new(GaussLegendre::new(nodes))),
    )
}

/// Result of a real integral together with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Integral {
    value: f64,
    error: f64,
}

fn run<const K: usize>(
    what: &'static str,
    q: &QuadConfig,
    abs: f64,
    f: impl FnMut(f64) -> Result<[f64; K], OracleError>,
    lo: f64,
    hi: f64,
    panels: usize,
) -> Result<quad::Estimate<K>, OracleError> {
    let gl = rule(q.nodes_per_panel);
    quad::integrate(&gl, f, lo, hi, panels, q.tolerance(abs)).map_err(|e| match e {
        quad::Failure::Budget { error, panels } => OracleError::QuadratureFailure {
            what,
            error,
            panels,
        },
        quad::Failure::Integrand(e) => e,
    })
}

/// Number of starting panels for an integrand oscillating with phase `phase`
/// over the whole interval.
fn oscillation_panels(phase: f64) -> usize {
    if phase > 20.0 {
        (phase / 5.0).ceil() as usize
    } else {
        1
    }
}

fn shifted_product_integral(
    what: &'static str,
    wave: impl Fn(f64) -> f64,
    pt: PhasePoint,
    half_width: f64,
    hbar: f64,
    q: &QuadConfig,
) -> Result<ComplexValue, OracleError> {
    let k = 2.0 * pt.p / hbar;
    let integrand = |y: f64| {
        let prod = wave(pt.x + y) * wave(pt.x - y);
        let (sin, cos) = (k * y).sin_cos();
        Ok([prod * cos, -prod * sin])
    };
    let panels = oscillation_panels(pt.p.abs() * half_width / hbar);
    let est = run(
        what,
        q,
        q.abs_tol * PI * hbar,
        integrand,
        -half_width,
        half_width,
        panels,
    )?;
    let scale = 1.0 / (PI * hbar);
    Ok(ComplexValue {
        re: est.value[0] * scale,
        im: est.value[1] * scale,
    })
}

/// Semiconfined Wigner function by quadrature of the truncated shift integral.
pub fn wigner_quadrature_semiconfined(
    n: u32,
    pt: PhasePoint,
    osc: &Oscillator,
    q: &QuadConfig,
) -> Result<ComplexValue, OracleError> {
    q.validate()?;
    let b = pt.x + osc.params().a;
    if b <= 0.0 {
        return Ok(ComplexValue::ZERO);
    }
    shifted_product_integral(
        "semiconfined Wigner integral",
        |z| psi_semiconfined(n, z, osc),
        pt,
        b,
        osc.params().hbar,
        q,
    )
}

/// Canonical Wigner function by quadrature over a Gaussian-truncated shift range.
pub fn wigner_quadrature_canonical(
    n: u32,
    pt: PhasePoint,
    osc: &Oscillator,
    q: &QuadConfig,
) -> Result<ComplexValue, OracleError> {
    q.validate()?;
    // psi(x+y) psi(x-y) carries exp(-lambda0^2 y^2) times polynomials of degree 2n.
    let reach = (2.0 * f64::from(n) + 1.0).sqrt() + q.gaussian_reach();
    let half_width = reach / osc.derived().lambda0;
    shifted_product_integral(
        "canonical Wigner integral",
        |z| psi_canonical(n, z, osc),
        pt,
        half_width,
        osc.params().hbar,
        q,
    )
}

/// Position window `[lo, hi]` outside which `|psi_n|^2` is below the cutoff.
fn position_window(n: u32, model: Model, osc: &Oscillator, q: &QuadConfig) -> (f64, f64) {
    let d = osc.derived();
    match model {
        Model::Canonical => {
            let reach = ((2.0 * f64::from(n) + 1.0).sqrt() + q.gaussian_reach()) / d.lambda0;
            (-d.x0 - reach, -d.x0 + reach)
        }
        Model::Semiconfined => {
            let a = osc.params().a;
            // |psi|^2 <= C b^(2s+2n) exp(-2 kappa b); find where it falls below the cutoff.
            let kappa = osc.kappa();
            let power = 2.0 * (d.s + f64::from(n));
            let env = |b: f64| power * b.ln() - 2.0 * kappa * b;
            let peak_b = (power / (2.0 * kappa)).max(f64::MIN_POSITIVE);
            let target = env(peak_b) + q.tail_cutoff.ln();
            let mut lo = peak_b;
            let mut hi = peak_b.max(1.0 / kappa);
            while env(hi) > target {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if env(mid) > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (-a, hi - a)
        }
    }
}

fn closed_form(model: Model, n: u32, p: f64, x: f64, osc: &Oscillator) -> Result<f64, OracleError> {
    let w = wigner(model, n, PhasePoint::new(p, x), osc);
    if w.is_finite() {
        Ok(w)
    } else {
        Err(OracleError::NonFinite { p, x })
    }
}

/// Momentum integral of the closed form at fixed `x`, with the truncation
/// error added to the quadrature error.
fn marginal_integral(
    n: u32,
    x: f64,
    model: Model,
    osc: &Oscillator,
    q: &QuadConfig,
    budget: f64,
) -> Result<Integral, OracleError> {
    let prm = osc.params();
    let d = osc.derived();
    let p_scale = (prm.m0 * prm.hbar * prm.omega).sqrt();
    let (p_cut, tail, frequency) = match model {
        Model::Canonical => {
            let reach = (2.0 * f64::from(n) + 1.0).sqrt() + q.gaussian_reach();
            let p_cut = reach * p_scale;
            // exp(-p^2/p_scale^2) |L_n| envelope beyond the cut, both signs.
            let e = p_cut * p_cut / (p_scale * p_scale);
            let poly: f64 = (0..=n)
                .map(|j| {
                    (ln_factorial(n) - ln_factorial(j) - ln_factorial(n - j) - ln_factorial(j)
                        + f64::from(j) * (4.0 * e).ln())
                    .exp()
                })
                .sum();
            let tail =
                2.0 / (PI * prm.hbar) * (-e).exp() * poly * p_scale * p_scale / (2.0 * p_cut);
            (p_cut, tail, 0.0)
        }
        Model::Semiconfined => {
            let b = x + prm.a;
            if b <= 0.0 {
                return Ok(Integral {
                    value: 0.0,
                    error: 0.0,
                });
            }
            let mut p_cut = p_scale * ((2.0 * f64::from(n) + 1.0).sqrt() + 4.0)
                + prm.hbar * (d.s + f64::from(n) + 1.0) / b;
            let mut tail = semiconfined_momentum_tail_bound(n, x, p_cut, osc);
            let limit = p_cut * 1e6;
            while tail > 0.5 * budget {
                p_cut *= 1.5;
                if p_cut > limit {
                    return Err(OracleError::QuadratureFailure {
                        what: "momentum truncation",
                        error: tail,
                        panels: 0,
                    });
                }
                tail = semiconfined_momentum_tail_bound(n, x, p_cut, osc);
            }
            (p_cut, tail, 2.0 * b / prm.hbar)
        }
    };
    let panels = oscillation_panels(0.5 * frequency * p_cut);
    let f = |p: f64| Ok([closed_form(model, n, p, x, osc)?]);
    let est = run("momentum marginal", q, 0.25 * budget, f, 0.0, p_cut, panels)?;
    Ok(Integral {
        value: 2.0 * est.value[0],
        error: 2.0 * est.error + tail,
    })
}

/// `int W_n(p, x) dp` of the closed form over a certified momentum range.
pub fn position_marginal(
    n: u32,
    x: f64,
    osc: &Oscillator,
    model: Model,
    q: &QuadConfig,
) -> Result<f64, OracleError> {
    q.validate()?;
    Ok(marginal_integral(n, x, model, osc, q, q.abs_tol)?.value)
}

/// `int W_n(p, x) dx` of the closed form over the position window of the state.
///
/// Outside the window one of `psi(x +- y)` is below the envelope cutoff, so
/// the neglected part is of the order of `tail_cutoff`; no formula for the
/// momentum distribution is assumed.
pub fn momentum_marginal(
    n: u32,
    p: f64,
    osc: &Oscillator,
    model: Model,
    q: &QuadConfig,
) -> Result<f64, OracleError> {
    q.validate()?;
    let (lo, hi) = position_window(n, model, osc, q);
    let panels = oscillation_panels(p.abs() * (hi - lo) / osc.params().hbar);
    let f = |x: f64| Ok([closed_form(model, n, p, x, osc)?]);
    Ok(run("position integral", q, q.abs_tol, f, lo, hi, panels.max(4))?.value[0])
}

/// `int int W_n dp dx` of the closed form over the truncated phase-space box.
pub fn normalization_2d(
    n: u32,
    osc: &Oscillator,
    model: Model,
    q: &QuadConfig,
) -> Result<f64, OracleError> {
    q.validate()?;
    let (lo, hi) = position_window(n, model, osc, q);
    let inner_budget = q.abs_tol / (hi - lo);
    let f = |x: f64| Ok([marginal_integral(n, x, model, osc, q, inner_budget)?.value]);
    let est = run(
        "phase-space normalization",
        q,
        0.5 * q.abs_tol,
        f,
        lo,
        hi,
        4,
    )?;
    Ok(est.value[0])
}

/// Gram matrix `<psi_m | psi_n>` for `m, n <= nmax`.
pub fn orthonormality_matrix(
    nmax: u32,
    osc: &Oscillator,
    model: Model,
    q: &QuadConfig,
) -> Result<Vec<Vec<f64>>, OracleError> {
    q.validate()?;
    if nmax > 10 {
        return Err(OracleError::Domain(format!(
            "nmax must be <= 10, got {nmax}"
        )));
    }
    let (lo, hi) = position_window(nmax, model, osc, q);
    let size = nmax as usize + 1;
    let mut gram = vec![vec![0.0; size]; size];
    for m in 0..=nmax {
        for n in m..=nmax {
            let f = |x: f64| Ok([psi(model, m, x, osc) * psi(model, n, x, osc)]);
            let est = run("overlap integral", q, q.abs_tol, f, lo, hi, 4)?;
            gram[m as usize][n as usize] = est.value[0];
            gram[n as usize][m as usize] = est.value[0];
        }
    }
    Ok(gram)
}

/// Both sides of `int_{-aa}^{aa} (aa^2 - x^2)^(beta-1) e^(i lam x) dx
/// = sqrt(pi) Gamma(beta) (2 aa / lam)^(beta-1/2) J_(beta-1/2)(aa lam)`.
pub fn check_table_integral(
    aa: f64,
    beta: f64,
    lam: f64,
) -> Result<(ComplexValue, f64), OracleError> {
    if !(aa > 0.0 && aa.is_finite()) {
        return Err(OracleError::Domain(format!(
            "half-width must be positive, got {aa}"
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(OracleError::Domain(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if !lam.is_finite() {
        return Err(OracleError::Domain(format!(
            "lambda must be finite, got {lam}"
        )));
    }
    let q = QuadConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-13,
        max_panels: 8192,
        ..QuadConfig::default()
    };
    let f = |x: f64| {
        let w = ((aa - x) * (aa + x)).powf(beta - 1.0);
        let (sin, cos) = (lam * x).sin_cos();
        Ok([w * cos, w * sin])
    };
    let panels = oscillation_panels(lam.abs() * aa);
    let est = run("table integral", &q, q.abs_tol, f, -aa, aa, panels.max(2))?;
    // (2 aa / lam)^nu J_nu(aa lam) = (aa / p)^nu J_nu(2 p aa) with p = lam / 2; finite at lam = 0.
    let sbp = scaled_bessel_product(RealOrder::new(beta - 0.5)?, aa, 0.5 * lam, 1.0)?;
    let rhs = PI.sqrt() * lgamma(beta)?.exp() * sbp;
    Ok((
        ComplexValue {
            re: est.value[0],
            im: est.value[1],
        },
        rhs,
    ))
}

/// Both sides of the Laguerre product expansion
/// `L_n(x) L_n(y) = Gamma(n+a+1)/n! sum_k (xy)^k / (k! Gamma(k+a+1)) L_(n-k)^(a+2k)(x+y)`.
pub fn check_laguerre_product(
    n: u32,
    alpha: f64,
    x: f64,
    y: f64,
) -> Result<(f64, f64), OracleError> {
    let idx = PolyIndex::new(n, alpha)?;
    let lhs = laguerre_raw(idx.n(), alpha, x) * laguerre_raw(idx.n(), alpha, y);
    let lead = lgamma(f64::from(n) + alpha + 1.0)? - ln_factorial(n);
    let mut rhs = 0.0;
    for k in 0..=n {
        let kf = f64::from(k);
        let coef = (lead - ln_factorial(k) - lgamma(kf + alpha + 1.0)?).exp();
        rhs += coef * (x * y).powi(k as i32) * laguerre_raw(n - k, alpha + 2.0 * kf, x + y);
    }
    Ok((lhs, rhs))
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl CheckRecord {
    /// Passes iff `measured <= tolerance` (so `NaN` fails).
    pub fn new(
        name: impl Into<String>,
        inputs: impl Into<String>,
        measured: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            inputs: inputs.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            extra: BTreeMap::new(),
        }
    }

    /// A record for a computation that failed outright.
    pub fn failed(name: impl Into<String>, inputs: impl Into<String>, tolerance: f64) -> Self {
        Self::new(name, inputs, f64::NAN, tolerance)
    }

    pub fn with_extra(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_owned(), value);
        self
    }
}

/// A set of checks with free-form notes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Largest measured value among the checks (`NaN` if any is `NaN`).
    pub fn worst(&self) -> f64 {
        self.checks.iter().fold(0.0f64, |m, c| {
            if m.is_nan() || c.measured.is_nan() {
                f64::NAN
            } else {
                m.max(c.measured)
            }
        })
    }
}
