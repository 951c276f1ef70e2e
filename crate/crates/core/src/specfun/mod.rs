//! Special functions needed by the closed-form Wigner distributions.
//!
//! Everything here is evaluated from elementary functions only: log-gamma by a
//! fixed Lanczos sum, polynomials by recurrence, and Bessel functions of real
//! order by the ascending series, Hankel's expansion or Miller's recurrence.
//! Values that can leave the double range are returned as [`LogAbs`] pairs so
//! that callers can combine them before exponentiating once.

mod bessel;
mod dd;
mod gamma;
mod hyper;
mod poly;

pub use bessel::{
    bessel_j, ln_bessel_j, ln_scaled_bessel_product, scaled_bessel_product, RealOrder,
};
pub use gamma::{lgamma, pochhammer};
pub use hyper::hyp0f1;
pub use poly::{hermite, laguerre, PolyIndex};

pub(crate) use bessel::{in_series_region, scaled_bessel_product_run};
pub(crate) use dd::Dd;
pub(crate) use gamma::{lgamma_pos, ln_factorial, ln_pochhammer_pos};
pub(crate) use poly::laguerre_raw;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("{function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },
    #[error("{function}: no convergence after {iterations} iterations")]
    NoConvergence {
        function: &'static str,
        iterations: usize,
    },
}

/// A real number stored as `sign * exp(ln_abs)`.
///
/// Zero is represented by `sign == 0` and `ln_abs == -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAbs {
    pub ln_abs: f64,
    pub sign: f64,
}

impl LogAbs {
    pub const ZERO: LogAbs = LogAbs {
        ln_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                ln_abs: v.abs().ln(),
                sign: v.signum(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0.0
    }

    /// Multiply by `exp(shift)`.
    pub fn scale_ln(self, shift: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self {
                ln_abs: self.ln_abs + shift,
                sign: self.sign,
            }
        }
    }

    pub fn value(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

impl std::ops::Mul for LogAbs {
    type Output = LogAbs;

    fn mul(self, other: LogAbs) -> Self {
        if self.is_zero() || other.is_zero() {
            Self::ZERO
        } else {
            Self {
                ln_abs: self.ln_abs + other.ln_abs,
                sign: self.sign * other.sign,
            }
        }
    }
}
