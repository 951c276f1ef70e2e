//! Orthogonal polynomials evaluated by three-term recurrence.

use super::SpecFunError;

/// Degree and parameter of a generalized Laguerre polynomial `L_n^(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyIndex {
    n: u32,
    alpha: f64,
}

impl PolyIndex {
    pub fn new(n: u32, alpha: f64) -> Result<Self, SpecFunError> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(SpecFunError::Domain {
                function: "laguerre",
                reason: format!("Laguerre parameter must exceed -1, got {alpha}"),
            });
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Generalized Laguerre polynomial `L_n^(alpha)(x)`.
pub fn laguerre(idx: PolyIndex, x: f64) -> f64 {
    laguerre_raw(idx.n, idx.alpha, x)
}

/// Upward recurrence `(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}`.
pub(crate) fn laguerre_raw(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = alpha + 1.0 - x;
    for k in 1..n {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn laguerre_low_degrees() {
        assert_eq!(laguerre(PolyIndex::new(0, 3.7).unwrap(), 9.9), 1.0);
        assert_eq!(laguerre(PolyIndex::new(1, 2.0).unwrap(), 3.0), 0.0);
        assert_eq!(laguerre(PolyIndex::new(2, 0.0).unwrap(), 2.0), -1.0);
    }

    #[test]
    fn laguerre_rejects_bad_parameter() {
        assert!(PolyIndex::new(3, -1.0).is_err());
        assert!(PolyIndex::new(3, f64::NAN).is_err());
        assert!(PolyIndex::new(3, -0.99).is_ok());
    }

    #[test]
    fn laguerre_explicit_sum() {
        // L_n^(a)(x) = sum_j (-1)^j C(n+a, n-j) x^j / j!
        let (n, a, x) = (6u32, 2.5f64, 1.7f64);
        let mut sum = 0.0;
        for j in 0..=n {
            let mut binom = 1.0;
            for i in 0..(n - j) {
                binom *= (a + f64::from(j) + 1.0 + f64::from(i)) / (f64::from(i) + 1.0);
            }
            let jf: f64 = (1..=j).map(f64::from).product();
            sum += if j % 2 == 0 { 1.0 } else { -1.0 } * binom * x.powi(j as i32) / jf;
        }
        assert!((laguerre_raw(n, a, x) - sum).abs() < 1e-13 * sum.abs().max(1.0));
    }

    #[test]
    fn hermite_low_degrees() {
        assert_eq!(hermite(0, 1.23), 1.0);
        assert_eq!(hermite(1, 2.0), 4.0);
        assert_eq!(hermite(2, 1.0), 2.0);
        assert_eq!(hermite(3, 0.5), 8.0 * 0.125 - 12.0 * 0.5);
    }

    proptest! {
        #[test]
        fn laguerre_recurrence_consistency(
            n in 1u32..20,
            alpha in -0.9f64..40.0,
            x in -50.0f64..50.0,
        ) {
            let next = laguerre_raw(n + 1, alpha, x);
            let cur = laguerre_raw(n, alpha, x);
            let prev = laguerre_raw(n - 1, alpha, x);
            let nf = f64::from(n);
            let lhs = (nf + 1.0) * next;
            let rhs = (2.0 * nf + alpha + 1.0 - x) * cur - (nf + alpha) * prev;
            let scale = lhs.abs()
                .max(((2.0 * nf + alpha + 1.0 - x) * cur).abs())
                .max(((nf + alpha) * prev).abs())
                .max(f64::MIN_POSITIVE);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }
    }
}
