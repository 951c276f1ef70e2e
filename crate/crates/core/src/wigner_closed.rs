//! Closed-form Wigner functions.
//!
//! The semiconfined forms are finite sums over `k = 0..=n` of
//! `(x+a)/p`-scaled Bessel functions of order `s + k + 1/2` times generalized
//! Laguerre polynomials. The very large and very small common factors (e.g.
//! `(g0 lambda0^2 a)^(2s+1)` against `exp(-2 g0 lambda0^2 a (x+a))`) are kept
//! in log form and never meet in linear form. The momentum
//! enters only through `|p|`, so the result is exactly even in `p`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::models::{Model, Oscillator};
use crate::specfun::{
    in_series_region, laguerre_raw, lgamma_pos, ln_factorial, ln_pochhammer_pos,
    ln_scaled_bessel_product, scaled_bessel_product_run, Dd, LogAbs,
};

/// Landau's uniform bound `|J_nu(z)| <= c z^(-1/3)` for `nu >= 0`, `z > 0`.
const LANDAU_C: f64 = 0.785_746_5;

/// A point `(p, x)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub p: f64,
    pub x: f64,
}

impl PhasePoint {
    pub fn new(p: f64, x: f64) -> Self {
        Self { p, x }
    }
}

/// Upper bound `1 / (pi hbar)` on the magnitude of any Wigner function.
pub fn wigner_bound(osc: &Oscillator) -> f64 {
    1.0 / (PI * osc.params().hbar)
}

/// Wigner function of the ordinary oscillator in the field `g x`.
pub fn wigner_canonical(n: u32, pt: PhasePoint, osc: &Oscillator) -> f64 {
    let prm = osc.params();
    let x0 = osc.derived().x0;
    let shifted = pt.x + x0;
    // E / (hbar omega) with the square completed, so it is never negative.
    let energy = (pt.p * pt.p / (2.0 * prm.m0)
        + 0.5 * prm.m0 * prm.omega * prm.omega * shifted * shifted)
        / (prm.hbar * prm.omega);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign / (PI * prm.hbar) * (-2.0 * energy).exp() * laguerre_raw(n, 0.0, 4.0 * energy)
}

/// Ground-state Wigner function of the semiconfined oscillator.
pub fn wigner_semiconfined_ground(pt: PhasePoint, osc: &Oscillator) -> f64 {
    let Some(b) = distance_from_wall(pt, osc) else {
        return 0.0;
    };
    let s = osc.derived().s;
    let hbar = osc.params().hbar;
    match ln_scaled_bessel_product(s + 0.5, b, pt.p, hbar) {
        Ok(sbp) => sbp.scale_ln(ln_prefactor(b, osc)).value(),
        Err(_) => f64::NAN,
    }
}

/// Wigner function of semiconfined state `n`, with or without the field.
///
/// For large `n` and `s` the summands alternate and cancel by many orders of
/// magnitude. Where that happens their relative sizes are carried in
/// double-double and only the common scale factor is formed in `f64`.
/// Returns `NaN` only if a Bessel evaluation fails to converge.
pub fn wigner_semiconfined(n: u32, pt: PhasePoint, osc: &Oscillator) -> f64 {
    if n == 0 {
        return wigner_semiconfined_ground(pt, osc);
    }
    let Some(b) = distance_from_wall(pt, osc) else {
        return 0.0;
    };
    let hbar = osc.params().hbar;
    // The plain sum is much cheaper in the series region; keep it when the
    // terms do not cancel appreciably.
    if in_series_region(osc.derived().s + 0.5, 2.0 * pt.p.abs() * b / hbar) {
        match log_form_sum(n, b, pt.p, osc) {
            Some((v, cancellation)) if cancellation < MAX_PLAIN_CANCELLATION => return v,
            Some(_) => {}
            None => return f64::NAN,
        }
    }
    match extended_sum(n, b, pt.p, osc) {
        Ok(v) if v.is_finite() => v,
        Ok(_) => log_form_sum(n, b, pt.p, osc).map_or(f64::NAN, |(v, _)| v),
        Err(_) => f64::NAN,
    }
}

/// Largest `sum |t_k| / |sum t_k|` accepted from `f64` summation.
const MAX_PLAIN_CANCELLATION: f64 = 1e3;

fn extended_sum(
    n: u32,
    b: f64,
    p: f64,
    osc: &Oscillator,
) -> Result<f64, crate::specfun::SpecFunError> {
    let s = osc.derived().s;
    let hbar = osc.params().hbar;
    let kappa = osc.kappa();
    let (ln_scale, bessel) = scaled_bessel_product_run(s + 0.5, n as usize + 1, b, p, hbar)?;
    let step = Dd::prod(2.0 * kappa, 2.0 * kappa) * hbar;
    let arg = Dd::prod(4.0 * kappa, b);
    let mut coef = Dd::ONE;
    let mut sum = Dd::ZERO;
    for (k, sbp) in (0..=n).zip(bessel) {
        let kf = f64::from(k);
        if k > 0 {
            coef = coef * step * Dd::sum(s, kf) / (Dd::sum(2.0 * s, kf) * kf);
        }
        sum = sum + coef * sbp * laguerre_dd(n - k, Dd::sum(2.0 * s, 2.0 * kf), arg);
    }
    Ok(LogAbs::from_value(sum.to_f64())
        .scale_ln(ln_prefactor(b, osc) + ln_scale)
        .value())
}

/// `L_m^(alpha)(x)` by the three-term recurrence in double-double.
fn laguerre_dd(m: u32, alpha: Dd, x: Dd) -> Dd {
    let mut prev = Dd::ONE;
    if m == 0 {
        return prev;
    }
    let mut cur = alpha + 1.0 - x;
    for j in 1..m {
        let jf = f64::from(j);
        let next = ((alpha + (2.0 * jf + 1.0) - x) * cur - (alpha + jf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Summation entirely in log form, with the cancellation ratio of the terms.
fn log_form_sum(n: u32, b: f64, p: f64, osc: &Oscillator) -> Option<(f64, f64)> {
    let mut terms = (0..=n)
        .map(|k| summand(n, k, b, p, osc))
        .collect::<Result<Vec<_>, _>>()
        .ok()?;
    Some(sum_log_terms(&mut terms))
}

/// Wigner function of either model.
pub fn wigner(model: Model, n: u32, pt: PhasePoint, osc: &Oscillator) -> f64 {
    match model {
        Model::Canonical => wigner_canonical(n, pt, osc),
        Model::Semiconfined => wigner_semiconfined(n, pt, osc),
    }
}

fn distance_from_wall(pt: PhasePoint, osc: &Oscillator) -> Option<f64> {
    let b = pt.x + osc.params().a;
    (b > 0.0).then_some(b)
}

/// `ln[2 hbar^(s-1/2) (g0 lambda0^2 a)^(2s+1) / Gamma(s+1/2) * exp(-2 g0 lambda0^2 a b)]`.
fn ln_prefactor(b: f64, osc: &Oscillator) -> f64 {
    let s = osc.derived().s;
    let kappa = osc.kappa();
    LN_2 + (s - 0.5) * osc.params().hbar.ln() + (2.0 * s + 1.0) * kappa.ln()
        - lgamma_pos(s + 0.5)
        - 2.0 * kappa * b
}

/// Log of the `k`-th summand without the Bessel and Laguerre factors.
fn ln_coefficient(k: u32, osc: &Oscillator) -> f64 {
    let s = osc.derived().s;
    let kf = f64::from(k);
    2.0 * kf * (2.0 * osc.kappa()).ln() - ln_factorial(k) + ln_pochhammer_pos(s + 1.0, k)
        - ln_pochhammer_pos(2.0 * s + 1.0, k)
        + kf * osc.params().hbar.ln()
}

fn summand(
    n: u32,
    k: u32,
    b: f64,
    p: f64,
    osc: &Oscillator,
) -> Result<LogAbs, crate::specfun::SpecFunError> {
    let s = osc.derived().s;
    let kf = f64::from(k);
    let sbp = ln_scaled_bessel_product(s + kf + 0.5, b, p, osc.params().hbar)?;
    let poly = laguerre_raw(n - k, 2.0 * s + 2.0 * kf, 4.0 * osc.kappa() * b);
    Ok((sbp * LogAbs::from_value(poly)).scale_ln(ln_prefactor(b, osc) + ln_coefficient(k, osc)))
}

/// Sums log-form terms largest first with Neumaier compensation and
/// exponentiates the common scale once at the end. Also returns
/// `sum |t| / |sum t|`.
fn sum_log_terms(terms: &mut Vec<LogAbs>) -> (f64, f64) {
    terms.retain(|t| !t.is_zero());
    if terms.is_empty() {
        return (0.0, 1.0);
    }
    terms.sort_by(|l, r| r.ln_abs.total_cmp(&l.ln_abs));
    let top = terms[0].ln_abs;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut magnitude = 0.0f64;
    for t in terms.iter() {
        let v = t.sign * (t.ln_abs - top).exp();
        magnitude += v.abs();
        let next = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - next) + v
        } else {
            (v - next) + sum
        };
        sum = next;
    }
    let total = sum + comp;
    (
        LogAbs::from_value(total).scale_ln(top).value(),
        magnitude / total.abs(),
    )
}

/// Upper bound on `|int_{|p| > p_cut} W_n(p, x) dp|` for the semiconfined model.
///
/// Each summand is `(b/p)^nu J_nu(2pb/hbar)`. For `nu >= 1` one integration by
/// parts with `int_Z^inf z^(1-nu) J_nu = Z^(1-nu) J_(nu-1)(Z)` leaves terms that
/// Landau's `|J_mu(z)| <= c z^(-1/3)` controls with decay `p^(-nu-1/3)`; for
/// `2/3 < nu < 1` the bound is applied directly (decay `p^(-nu+2/3)`). Infinite
/// when the lowest order is too small for either.
pub fn semiconfined_momentum_tail_bound(n: u32, x: f64, p_cut: f64, osc: &Oscillator) -> f64 {
    let b = x + osc.params().a;
    if b <= 0.0 {
        return 0.0;
    }
    let s = osc.derived().s;
    let hbar = osc.params().hbar;
    let z = 2.0 * p_cut * b / hbar;
    let mut total = 0.0;
    for k in 0..=n {
        let nu = s + f64::from(k) + 0.5;
        // ln of (b/p_cut)^nu * p_cut * c z^(-1/3) * factor
        let ln_factor = if nu >= 1.0 {
            (hbar / (2.0 * b * p_cut) * (1.0 + 1.0 / (nu + 1.0 / 3.0))).ln()
        } else if nu > 2.0 / 3.0 {
            -(nu - 2.0 / 3.0).ln()
        } else {
            return f64::INFINITY;
        };
        let poly = laguerre_raw(n - k, 2.0 * s + 2.0 * f64::from(k), 4.0 * osc.kappa() * b).abs();
        if poly == 0.0 {
            continue;
        }
        let ln_amp = ln_prefactor(b, osc)
            + ln_coefficient(k, osc)
            + poly.ln()
            + nu * (b / p_cut).ln()
            + p_cut.ln()
            + LANDAU_C.ln()
            - z.ln() / 3.0
            + ln_factor;
        // Both signs of p.
        total += 2.0 * ln_amp.exp();
    }
    total
}
