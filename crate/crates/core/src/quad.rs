//! Globally adaptive Gauss–Legendre quadrature for vector-valued integrands.
//!
//! Every panel is integrated with the fixed rule on the whole panel and on its
//! two halves; the difference is the panel's error estimate and the halves are
//! kept as its value. The panel with the largest estimate is bisected until the
//! summed estimate falls under the requested tolerance or the panel budget is
//! exhausted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_n` from Tricomi's initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on `[lo, hi]`; also returns the integral of the largest
    /// component magnitude, which sets the roundoff floor.
    fn apply<const K: usize, E>(
        &self,
        f: &mut impl FnMut(f64) -> Result<[f64; K], E>,
        lo: f64,
        hi: f64,
    ) -> Result<([f64; K], f64), E> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = [0.0; K];
        let mut mag = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * t)?;
            let mut m = 0.0f64;
            for (a, x) in acc.iter_mut().zip(v) {
                *a += w * x;
                m = m.max(x.abs());
            }
            mag += w * m;
        }
        Ok((acc.map(|a| a * half), mag * half.abs()))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Tolerances and budget of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

/// Converged integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const K: usize> {
    pub value: [f64; K],
    pub error: f64,
    pub panels: usize,
}

/// Why an adaptive integration stopped without an answer.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure<E> {
    /// The panel budget ran out; carries the last error estimate.
    Budget { error: f64, panels: usize },
    /// The integrand itself failed.
    Integrand(E),
}

struct Panel<const K: usize> {
    lo: f64,
    hi: f64,
    halves: [([f64; K], f64); 2],
    value: [f64; K],
    error: f64,
}

impl<const K: usize> PartialEq for Panel<K> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const K: usize> Eq for Panel<K> {}

impl<const K: usize> PartialOrd for Panel<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const K: usize> Ord for Panel<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn max_abs<const K: usize>(v: &[f64; K]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Integrates `f` over `[lo, hi]`, starting from `initial_panels` equal panels.
pub fn integrate<const K: usize, E>(
    rule: &GaussLegendre,
    mut f: impl FnMut(f64) -> Result<[f64; K], E>,
    lo: f64,
    hi: f64,
    initial_panels: usize,
    tol: Tolerance,
) -> Result<Estimate<K>, Failure<E>> {
    if lo == hi {
        return Ok(Estimate {
            value: [0.0; K],
            error: 0.0,
            panels: 0,
        });
    }
    let make = |f: &mut dyn FnMut(f64) -> Result<[f64; K], E>,
                lo: f64,
                hi: f64,
                whole: ([f64; K], f64)|
     -> Result<Panel<K>, E> {
        let mid = 0.5 * (lo + hi);
        let mut g = |x: f64| f(x);
        let left = rule.apply(&mut g, lo, mid)?;
        let right = rule.apply(&mut g, mid, hi)?;
        let mut value = [0.0; K];
        let mut diff = [0.0; K];
        for k in 0..K {
            value[k] = left.0[k] + right.0[k];
            diff[k] = value[k] - whole.0[k];
        }
        // Cancellation inside the panel limits what the rule can resolve.
        let floor = 20.0 * f64::EPSILON * (left.1 + right.1);
        Ok(Panel {
            lo,
            hi,
            halves: [left, right],
            value,
            error: max_abs(&diff).max(floor),
        })
    };

    let count = initial_panels.max(1);
    let mut heap = BinaryHeap::with_capacity(count * 2);
    for i in 0..count {
        let a = lo + (hi - lo) * i as f64 / count as f64;
        let b = if i + 1 == count {
            hi
        } else {
            lo + (hi - lo) * (i + 1) as f64 / count as f64
        };
        let mut g = |x: f64| f(x);
        let whole = rule.apply(&mut g, a, b).map_err(Failure::Integrand)?;
        heap.push(make(&mut g, a, b, whole).map_err(Failure::Integrand)?);
    }

    loop {
        let (value, error) = totals(&heap);
        let target = tol.abs.max(tol.rel * max_abs(&value));
        if error <= target {
            return Ok(Estimate {
                value,
                error,
                panels: heap.len(),
            });
        }
        if heap.len() >= tol.max_panels {
            return Err(Failure::Budget {
                error,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            // Panel can no longer be split in floating point.
            return Err(Failure::Budget {
                error,
                panels: heap.len() + 1,
            });
        }
        let mut g = |x: f64| f(x);
        let [left, right] = worst.halves;
        heap.push(make(&mut g, worst.lo, mid, left).map_err(Failure::Integrand)?);
        heap.push(make(&mut g, mid, worst.hi, right).map_err(Failure::Integrand)?);
    }
}

/// Sums panel values and errors in a fixed (position) order so the result does
/// not depend on heap layout.
fn totals<const K: usize>(heap: &BinaryHeap<Panel<K>>) -> ([f64; K], f64) {
    let mut panels: Vec<&Panel<K>> = heap.iter().collect();
    panels.sort_by(|l, r| l.lo.total_cmp(&r.lo));
    let mut value = [0.0; K];
    let mut error = 0.0;
    for p in panels {
        for (acc, v) in value.iter_mut().zip(p.value) {
            *acc += v;
        }
        error += p.error;
    }
    (value, error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn tol(abs: f64) -> Tolerance {
        Tolerance {
            abs,
            rel: 1e-14,
            max_panels: 2000,
        }
    }

    fn ok<const K: usize>(v: [f64; K]) -> Result<[f64; K], Infallible> {
        Ok(v)
    }

    #[test]
    fn rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(8);
        for deg in 0..16i32 {
            let sum: f64 = rule
                .nodes()
                .iter()
                .zip(rule.weights())
                .map(|(x, w)| w * x.powi(deg))
                .sum();
            let exact = if deg % 2 == 0 {
                2.0 / f64::from(deg + 1)
            } else {
                0.0
            };
            assert!((sum - exact).abs() < 1e-15, "degree {deg}: {sum}");
        }
    }

    #[test]
    fn rule_weights_sum_to_two_and_nodes_are_sorted() {
        for n in [8, 17, 32, 64] {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-14);
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn oscillatory_integral() {
        let rule = GaussLegendre::new(32);
        let est = integrate(
            &rule,
            |x: f64| ok([(40.0 * x).cos(), (40.0 * x).sin()]),
            0.0,
            3.0,
            1,
            tol(1e-13),
        )
        .unwrap();
        assert!((est.value[0] - (120.0f64).sin() / 40.0).abs() < 1e-14);
        assert!((est.value[1] - (1.0 - (120.0f64).cos()) / 40.0).abs() < 1e-14);
        assert!(est.error <= 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let rule = GaussLegendre::new(32);
        let est = integrate(&rule, |x: f64| ok([x.sqrt()]), 0.0, 1.0, 1, tol(1e-12)).unwrap();
        assert!((est.value[0] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let rule = GaussLegendre::new(8);
        let t = Tolerance {
            abs: 1e-15,
            rel: 1e-15,
            max_panels: 4,
        };
        match integrate(&rule, |x: f64| ok([(1.0 / x).sin()]), 1e-6, 1.0, 1, t) {
            Err(Failure::Budget { error, panels }) => {
                assert!(error > 0.0);
                assert!(panels >= 4);
            }
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn integrand_errors_propagate() {
        let rule = GaussLegendre::new(8);
        let r = integrate(
            &rule,
            |_x: f64| Err::<[f64; 1], _>("boom"),
            0.0,
            1.0,
            1,
            tol(1e-10),
        );
        assert_eq!(r.unwrap_err(), Failure::Integrand("boom"));
    }
}
