//! Oscillator parameters, the position-dependent mass profile and the
//! stationary-state wavefunctions of the canonical and semiconfined models.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::{hermite, laguerre_raw, lgamma_pos, ln_factorial, LogAbs};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parameter `{name}` must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("parameter `g` must be finite, got {0}")]
    NonFiniteField(f64),
    #[error(
        "field g = {g} gives 1 + 2 x0 / a = {radicand} <= 0; g0 is undefined (need g > {limit})"
    )]
    FieldBelowWall { g: f64, radicand: f64, limit: f64 },
}

/// Physical constants and model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub m0: f64,
    pub omega: f64,
    pub hbar: f64,
    /// Confinement length; the wall sits at `x = -a`.
    pub a: f64,
    /// Strength of the homogeneous external field `V = g x`.
    pub g: f64,
}

impl OscillatorParams {
    /// `m0 = omega = hbar = 1`.
    pub fn unit(a: f64, g: f64) -> Self {
        Self {
            m0: 1.0,
            omega: 1.0,
            hbar: 1.0,
            a,
            g,
        }
    }

    pub fn derive(&self) -> Result<DerivedParams, ModelError> {
        for (name, value) in [
            ("m0", self.m0),
            ("omega", self.omega),
            ("hbar", self.hbar),
            ("a", self.a),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(ModelError::NonPositive { name, value });
            }
        }
        if !self.g.is_finite() {
            return Err(ModelError::NonFiniteField(self.g));
        }
        let lambda0 = (self.m0 * self.omega / self.hbar).sqrt();
        let x0 = self.g / (self.m0 * self.omega * self.omega);
        let radicand = 1.0 + 2.0 * x0 / self.a;
        if radicand <= 0.0 {
            return Err(ModelError::FieldBelowWall {
                g: self.g,
                radicand,
                limit: -0.5 * self.m0 * self.omega * self.omega * self.a,
            });
        }
        Ok(DerivedParams {
            lambda0,
            x0,
            g0: radicand.sqrt(),
            s: lambda0 * lambda0 * self.a * self.a,
        })
    }
}

/// Quantities derived from [`OscillatorParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Inverse oscillator length `sqrt(m0 omega / hbar)`.
    pub lambda0: f64,
    /// Field-induced shift `g / (m0 omega^2)`.
    pub x0: f64,
    /// Field scale `sqrt(1 + 2 x0 / a)`; exactly 1 when `g = 0`.
    pub g0: f64,
    /// `lambda0^2 a^2`, which sets the Laguerre parameter `2s` and the Bessel orders.
    pub s: f64,
}

/// Which oscillator a Wigner function or wavefunction belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Canonical,
    Semiconfined,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Canonical => "canonical",
            Model::Semiconfined => "semiconfined",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(Model::Canonical),
            "semiconfined" => Ok(Model::Semiconfined),
            other => Err(format!(
                "unknown model `{other}` (expected canonical or semiconfined)"
            )),
        }
    }
}

/// A validated parameter set together with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    params: OscillatorParams,
    derived: DerivedParams,
}

impl Oscillator {
    pub fn new(params: OscillatorParams) -> Result<Self, ModelError> {
        let derived = params.derive()?;
        Ok(Self { params, derived })
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedParams {
        &self.derived
    }

    /// `lambda0^2 a g0`: the decay rate of the semiconfined envelope.
    pub(crate) fn kappa(&self) -> f64 {
        let d = &self.derived;
        d.lambda0 * d.lambda0 * self.params.a * d.g0
    }
}

/// `M(x) = a m0 / (a + x)` for `x > -a`, infinite at and beyond the wall.
pub fn effective_mass(x: f64, params: &OscillatorParams) -> f64 {
    if x <= -params.a {
        f64::INFINITY
    } else {
        params.a * params.m0 / (params.a + x)
    }
}

/// Stationary state `n` of the ordinary oscillator in the field `g x`.
pub fn psi_canonical(n: u32, x: f64, osc: &Oscillator) -> f64 {
    let d = osc.derived();
    let xi = d.lambda0 * (x + d.x0);
    let ln_norm = 0.25 * (d.lambda0 * d.lambda0 / std::f64::consts::PI).ln()
        - 0.5 * (f64::from(n) * std::f64::consts::LN_2 + ln_factorial(n));
    LogAbs::from_value(hermite(n, xi))
        .scale_ln(ln_norm - 0.5 * xi * xi)
        .value()
}

/// Normalisation constant `C_n^{gSC}` of the semiconfined state, in log form.
///
/// The sign is `(-1)^n`.
pub fn semiconfined_norm(n: u32, osc: &Oscillator) -> LogAbs {
    let d = osc.derived();
    let a = osc.params().a;
    let s = d.s;
    let ln_abs = (s + 0.5) * (2.0 * d.lambda0 * d.lambda0 * a * d.g0).ln()
        + 0.5 * (ln_factorial(n) - lgamma_pos(f64::from(n) + 2.0 * s + 1.0));
    LogAbs {
        ln_abs,
        sign: if n.is_multiple_of(2) { 1.0 } else { -1.0 },
    }
}

/// Stationary state `n` of the semiconfined oscillator; exactly zero for `x <= -a`.
pub fn psi_semiconfined(n: u32, x: f64, osc: &Oscillator) -> f64 {
    let b = x + osc.params().a;
    if b <= 0.0 {
        return 0.0;
    }
    let kappa = osc.kappa();
    let s = osc.derived().s;
    let poly = laguerre_raw(n, 2.0 * s, 2.0 * kappa * b);
    (semiconfined_norm(n, osc) * LogAbs::from_value(poly))
        .scale_ln(s * b.ln() - kappa * b)
        .value()
}

/// Wavefunction of either model.
pub fn psi(model: Model, n: u32, x: f64, osc: &Oscillator) -> f64 {
    match model {
        Model::Canonical => psi_canonical(n, x, osc),
        Model::Semiconfined => psi_semiconfined(n, x, osc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit(a: f64, g: f64) -> Oscillator {
        Oscillator::new(OscillatorParams::unit(a, g)).unwrap()
    }

    // Composite trapezoid; the integrands here vanish smoothly at both ends.
    fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> f64 {
        let h = (hi - lo) / steps as f64;
        let inner: f64 = (1..steps).map(|i| f(lo + h * i as f64)).sum();
        h * (inner + 0.5 * (f(lo) + f(hi)))
    }

    #[test]
    fn derive_examples() {
        let d = OscillatorParams::unit(2.0, 0.0).derive().unwrap();
        assert_eq!((d.lambda0, d.x0, d.g0, d.s), (1.0, 0.0, 1.0, 4.0));
        let d = OscillatorParams::unit(2.0, 2.0).derive().unwrap();
        assert_eq!(d.x0, 2.0);
        assert!((d.g0 - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.s, 4.0);
        assert!(matches!(
            OscillatorParams::unit(2.0, -1.0).derive(),
            Err(ModelError::FieldBelowWall { .. })
        ));
    }

    #[test]
    fn derive_rejects_nonpositive_constants() {
        let mut p = OscillatorParams::unit(1.0, 0.0);
        p.hbar = 0.0;
        assert!(matches!(
            p.derive(),
            Err(ModelError::NonPositive { name: "hbar", .. })
        ));
        let mut p = OscillatorParams::unit(-1.0, 0.0);
        p.a = -1.0;
        assert!(p.derive().is_err());
        assert!(OscillatorParams::unit(1.0, f64::NAN).derive().is_err());
    }

    #[test]
    fn effective_mass_profile() {
        let p = OscillatorParams::unit(2.0, 0.0);
        assert_eq!(effective_mass(0.0, &p), 1.0);
        assert_eq!(effective_mass(2.0, &p), 0.5);
        assert_eq!(effective_mass(-2.0, &p), f64::INFINITY);
        assert_eq!(effective_mass(-7.0, &p), f64::INFINITY);
    }

    #[test]
    fn canonical_examples() {
        let osc = unit(1.0, 0.0);
        assert!((psi_canonical(0, 0.0, &osc) - PI.powf(-0.25)).abs() < 1e-15);
        let osc = unit(1.0, 2.0);
        assert_eq!(psi_canonical(1, -osc.derived().x0, &osc), 0.0);
    }

    #[test]
    fn canonical_normalised() {
        for (n, g) in [(0u32, 0.0), (3, 0.0), (5, 2.0), (25, 0.0)] {
            let osc = unit(1.0, g);
            let x0 = osc.derived().x0;
            let norm = trapezoid(
                |x| psi_canonical(n, x, &osc).powi(2),
                -x0 - 14.0,
                -x0 + 14.0,
                4000,
            );
            assert!((norm - 1.0).abs() < 1e-12, "n={n}: {norm}");
        }
    }

    #[test]
    fn semiconfined_norm_examples() {
        let c = semiconfined_norm(0, &unit(1.0, 0.0));
        assert!((c.value() - 2.0).abs() < 1e-14);
        assert_eq!(semiconfined_norm(1, &unit(1.0, 0.0)).sign, -1.0);
        // g = 1 gives x0 = 1, g0 = sqrt(3) at a = 1.
        let osc = unit(1.0, 1.0);
        assert!((osc.derived().g0 - 3f64.sqrt()).abs() < 1e-15);
        let c = semiconfined_norm(0, &osc).value();
        assert!((c - 2.0 * 3f64.powf(0.75)).abs() < 1e-13, "{c}");
        let norm = trapezoid(|x| psi_semiconfined(0, x, &osc).powi(2), -1.0, 30.0, 20_000);
        assert!((norm - 1.0).abs() < 1e-9, "{norm}");
    }

    #[test]
    fn semiconfined_examples() {
        let osc = unit(1.0, 0.0);
        assert_eq!(psi_semiconfined(0, -1.0, &osc), 0.0);
        assert_eq!(psi_semiconfined(3, -5.0, &osc), 0.0);
        let v = psi_semiconfined(0, 0.0, &osc);
        assert!((v - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        let norm = trapezoid(
            |x| 4.0 * (x + 1.0).powi(2) * (-2.0 * (x + 1.0)).exp(),
            -1.0,
            30.0,
            20_000,
        );
        assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn semiconfined_orthonormal_small_grid() {
        for (a, g) in [(1.0, 0.0), (2.0, 2.0), (4.0, 4.0)] {
            let osc = unit(a, g);
            for m in 0..4u32 {
                for n in m..4u32 {
                    let v = trapezoid(
                        |x| psi_semiconfined(m, x, &osc) * psi_semiconfined(n, x, &osc),
                        -a,
                        40.0,
                        40_000,
                    );
                    let want = if m == n { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-8, "a={a} g={g} m={m} n={n}: {v}");
                }
            }
        }
    }

    #[test]
    fn field_free_matches_direct_formula() {
        for a in [0.7, 1.0, 2.5] {
            let osc = unit(a, 0.0);
            let s = a * a;
            for n in 0..5u32 {
                for &x in &[-0.5 * a, 0.0, 0.8, 3.0] {
                    let b = x + a;
                    let c = (2.0 * a).powf(s + 0.5)
                        * (0.5 * (ln_factorial(n) - lgamma_pos(f64::from(n) + 2.0 * s + 1.0)))
                            .exp()
                        * if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                    let direct =
                        c * b.powf(s) * (-a * b).exp() * laguerre_raw(n, 2.0 * s, 2.0 * a * b);
                    let got = psi_semiconfined(n, x, &osc);
                    assert!(
                        (got - direct).abs() <= 1e-13 * direct.abs().max(1e-300),
                        "a={a} n={n} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn node_count_equals_quantum_number() {
        for (a, g) in [(1.0, 0.0), (2.0, 2.0)] {
            let osc = unit(a, g);
            for n in 0..7u32 {
                let mut changes = 0;
                let mut last = 0.0f64;
                for i in 1..20_000 {
                    let x = -a + i as f64 * 0.002;
                    let v = psi_semiconfined(n, x, &osc);
                    if v != 0.0 {
                        if last != 0.0 && v.signum() != last.signum() {
                            changes += 1;
                        }
                        last = v;
                    }
                }
                assert_eq!(changes, n, "a={a} g={g} n={n}");
            }
        }
    }

    fn sup_distance_to_canonical(n: u32, a: f64) -> f64 {
        let sc = unit(a, 0.0);
        (0..=600)
            .map(|i| -3.0 + i as f64 * 0.01)
            .map(|x| (psi_semiconfined(n, x, &sc) - psi_canonical(n, x, &sc)).abs())
            .fold(0.0, f64::max)
    }

    // The distance decays like 1/a: at a = 40 it is below 0.02 only for n <= 1
    // (0.0073, 0.0177, 0.0307, 0.0531 for n = 0..3 in 30-digit arithmetic).
    #[test]
    fn large_confinement_approaches_canonical() {
        for n in 0..2u32 {
            let d = sup_distance_to_canonical(n, 40.0);
            assert!(d <= 0.02, "n={n}: {d}");
        }
        for n in 0..4u32 {
            let d40 = sup_distance_to_canonical(n, 40.0);
            let d80 = sup_distance_to_canonical(n, 80.0);
            let ratio = d40 / d80;
            assert!((1.8..2.2).contains(&ratio), "n={n}: {d40} / {d80}");
        }
    }
}
