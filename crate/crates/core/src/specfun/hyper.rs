//! The confluent limit function `0F1(; b; z)`.

use super::bessel::ln_bessel_j_unchecked;
use super::gamma::lgamma_pos;
use super::{LogAbs, SpecFunError};

const MAX_TERMS: usize = 100_000;

/// Below this value of `|z|` the series is summed directly for any `b`.
pub(crate) const SERIES_FLOOR: f64 = 9.0;

/// `0F1(; b; z) = sum_m z^m / ((b)_m m!)`.
///
/// For `z < 0` with `|z| > max(b, 9)` the alternating series cancels badly, so
/// the value is taken from `Gamma(b) |z|^((1-b)/2) J_{b-1}(2 sqrt|z|)` instead.
pub fn hyp0f1(b: f64, z: f64) -> Result<f64, SpecFunError> {
    if !b.is_finite() || b <= 0.0 {
        return Err(SpecFunError::Domain {
            function: "hyp0f1",
            reason: format!("lower parameter must be positive, got {b}"),
        });
    }
    if !z.is_finite() {
        return Err(SpecFunError::Domain {
            function: "hyp0f1",
            reason: format!("argument must be finite, got {z}"),
        });
    }
    if z >= 0.0 || -z <= b.max(SERIES_FLOOR) {
        return series(b, z);
    }
    let big_x = -z;
    let arg = 2.0 * big_x.sqrt();
    let nu = b - 1.0;
    let j = if nu >= 0.0 {
        ln_bessel_j_unchecked(nu, arg)?.value()
    } else {
        // J_nu = (2 (nu+1) / x) J_{nu+1} - J_{nu+2} with nu + 1 = b in (0, 1).
        let j1 = ln_bessel_j_unchecked(b, arg)?.value();
        let j2 = ln_bessel_j_unchecked(b + 1.0, arg)?.value();
        2.0 * b / arg * j1 - j2
    };
    Ok(LogAbs::from_value(j)
        .scale_ln(lgamma_pos(b) - 0.5 * nu * big_x.ln())
        .value())
}

/// Direct summation of the defining series. Stops once the terms are
/// monotonically decreasing and the last one is below 1e-17 of the sum.
pub(crate) fn series(b: f64, z: f64) -> Result<f64, SpecFunError> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 0..MAX_TERMS {
        let mf = m as f64;
        let denom = (b + mf) * (mf + 1.0);
        term *= z / denom;
        sum += term;
        let decreasing = z.abs() < (b + mf + 1.0) * (mf + 2.0);
        if decreasing && term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
        if term == 0.0 {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NoConvergence {
        function: "hyp0f1",
        iterations: MAX_TERMS,
    })
}
