//! Log-gamma and Pochhammer symbols.

use super::SpecFunError;

// Lanczos approximation with g = 607/128 and 15 terms (Godfrey's coefficient set).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;

/// Natural logarithm of the gamma function for finite `z > 0`.
pub fn lgamma(z: f64) -> Result<f64, SpecFunError> {
    if !z.is_finite() || z <= 0.0 {
        return Err(SpecFunError::Domain {
            function: "lgamma",
            reason: format!("argument must be finite and positive, got {z}"),
        });
    }
    Ok(lgamma_pos(z))
}

/// `ln Γ(z)` without argument checks; callers guarantee `z > 0`.
pub(crate) fn lgamma_pos(z: f64) -> f64 {
    if z == 1.0 || z == 2.0 {
        return 0.0;
    }
    if z < 0.5 {
        // Γ(z) = Γ(z + 1) / z keeps the series in its accurate range.
        return lanczos(z + 1.0) - z.ln();
    }
    lanczos(z)
}

fn lanczos(z: f64) -> f64 {
    let x = z - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    HALF_LN_2PI + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Rising factorial `a (a+1) ... (a+k-1)`; equals 1 for `k = 0`.
pub fn pochhammer(a: f64, k: i64) -> Result<f64, SpecFunError> {
    if k < 0 {
        return Err(SpecFunError::Domain {
            function: "pochhammer",
            reason: format!("count must be non-negative, got {k}"),
        });
    }
    Ok((0..k).fold(1.0, |acc, i| acc * (a + i as f64)))
}

/// `ln (a)_k` for `a > 0`, summed term by term so small `k` stays exact.
pub(crate) fn ln_pochhammer_pos(a: f64, k: u32) -> f64 {
    (0..k).map(|i| (a + f64::from(i)).ln()).sum()
}

/// `ln k!` for the small integer arguments used in finite sums.
pub(crate) fn ln_factorial(k: u32) -> f64 {
    if k < 2 {
        0.0
    } else if k <= 30 {
        (2..=k).map(|i| f64::from(i).ln()).sum()
    } else {
        lgamma_pos(f64::from(k) + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn lgamma_known_values() {
        assert!((lgamma(0.5).unwrap() - 0.572_364_942_924_700_087_07).abs() < 1e-15);
        assert_eq!(lgamma(1.0).unwrap(), 0.0);
        assert_eq!(lgamma(2.0).unwrap(), 0.0);
        assert!(rel(lgamma(5.0).unwrap(), 24f64.ln()) < 1e-14);
    }

    // Reference values from 30-digit mpmath.loggamma.
    #[test]
    fn lgamma_matches_extended_precision() {
        let cases = [
            (1e-8, 18.420_680_738_180_208_905),
            (0.1, 2.252_712_651_734_205_959_9),
            (3.7, 1.428_072_326_665_387_921_9),
            (17.25, 31.374_622_313_677_686_480),
            (1600.5, 10_205.333_165_656_134_769),
            (1.0e6, 12_815_504.569_147_611_660),
        ];
        for (z, want) in cases {
            let got = lgamma(z).unwrap();
            assert!(rel(got, want) < 1e-13, "lgamma({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn lgamma_rejects_bad_input() {
        assert!(lgamma(0.0).is_err());
        assert!(lgamma(-2.5).is_err());
        assert!(lgamma(f64::NAN).is_err());
        assert!(lgamma(f64::INFINITY).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.0, 2).unwrap(), 12.0);
        assert_eq!(pochhammer(0.5, 0).unwrap(), 1.0);
        assert_eq!(pochhammer(0.5, 3).unwrap(), 1.875);
        assert!(pochhammer(1.0, -1).is_err());
    }

    #[test]
    fn ln_pochhammer_agrees_with_gamma_ratio() {
        for &(a, k) in &[(1.5, 4u32), (17.0, 3), (1601.0, 5)] {
            let direct = ln_pochhammer_pos(a, k);
            let ratio = lgamma_pos(a + f64::from(k)) - lgamma_pos(a);
            assert!((direct - ratio).abs() < 1e-11 * ratio.abs().max(1.0));
        }
    }

    #[test]
    fn even_factorial_identity_is_exact() {
        let mut fact = 1.0f64;
        for m in 0..=10i64 {
            if m > 0 {
                fact *= m as f64;
            }
            let two_m_fact: f64 = (1..=2 * m).map(|i| i as f64).product();
            let rhs = 4f64.powi(m as i32) * pochhammer(0.5, m).unwrap() * fact;
            assert_eq!(two_m_fact, rhs, "m = {m}");
        }
    }
}
