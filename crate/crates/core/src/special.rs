//! Scalar special functions and stable summation primitives.
//!
//! Everything here is a standard numerical building block: Lanczos
//! log-gamma, a Chebyshev-fitted complementary error function, log-space
//! summation, and compensated (Neumaier) accumulation. Accuracy targets are
//! the usual ones for double precision: ~1e-14 relative for `ln_gamma`,
//! ~1e-7 relative for `erf`.

/// ln(1e-17): below this log-magnitude, `log1p(-x)` is replaced by the
/// two-term series in [`scaled_ln_one_minus_exp`].
const LN_TINY: f64 = -39.14394658089878;

/// Lanczos coefficients, g = 7, n = 9.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    if x < 0.5 {
        // Reflection keeps the Lanczos series in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// ln(n!) = ln_gamma(n + 1).
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln C(n, k); zero-count conventions give `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Complementary error function, fractional error below 1.2e-7.
pub fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.265_512_23
        + t * (1.000_023_68
            + t * (0.374_091_96
                + t * (0.096_784_18
                    + t * (-0.186_288_06
                        + t * (0.278_868_07
                            + t * (-1.135_203_98
                                + t * (1.488_515_87
                                    + t * (-0.822_152_23 + t * 0.170_872_77))))))));
    let v = t * poly.exp();
    if x >= 0.0 {
        v
    } else {
        2.0 - v
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    1.0 - erfc(x)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// ln(1 - e^x) for x < 0, stable across the whole range.
pub fn ln1m_exp(x: f64) -> f64 {
    debug_assert!(x <= 0.0);
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `m * log1p(-delta)` with `m = exp(ln_m)` and `delta = exp(ln_delta)`.
///
/// This is the exponent arithmetic behind terms of the form
/// `(1 - delta)^m` for `m` as large as 1e300. When `delta` is below 1e-17,
/// `log1p` is replaced by the two-term series `-delta (1 + delta/2)` applied
/// in log space, so the product keeps full relative accuracy even when
/// `delta` itself would underflow to a denormal or to zero.
pub fn scaled_ln_one_minus_exp(ln_m: f64, ln_delta: f64) -> f64 {
    if ln_m == f64::NEG_INFINITY || ln_delta == f64::NEG_INFINITY {
        // Zero exponent or zero delta: the factor is exactly 1.
        return 0.0;
    }
    debug_assert!(ln_delta <= 0.0, "delta must lie in [0, 1], got ln {ln_delta}");
    if ln_delta >= 0.0 {
        return f64::NEG_INFINITY;
    }
    if ln_delta > LN_TINY {
        ln_m.exp() * (-ln_delta.exp()).ln_1p()
    } else {
        -(ln_m + ln_delta).exp() * (1.0 + 0.5 * ln_delta.exp())
    }
}

/// Log-space sum of nonnegative terms given by their logs.
///
/// Max-shifted; finite terms are accumulated in ascending order so the
/// relative error stays bounded by the term count's round-off.
pub fn log_sum_exp(mut terms: Vec<f64>) -> f64 {
    terms.retain(|t| *t > f64::NEG_INFINITY);
    if terms.is_empty() {
        return f64::NEG_INFINITY;
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sum = 0.0;
    for t in &terms {
        sum += (t - max).exp();
    }
    max + sum.ln()
}

/// Neumaier-compensated accumulator: Kahan summation that also recovers
/// low-order bits when an addend exceeds the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(2.0)).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-12);
        // Gamma(11) = 10!
        assert!((ln_gamma(11.0) - 3_628_800f64.ln()).abs() < 1e-11);
    }

    #[test]
    fn ln_gamma_reflection_region() {
        // Gamma(0.25) = 3.6256099082219083119...
        assert!((ln_gamma(0.25) - 3.625_609_908_221_908_3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn ln_binomial_exact_small() {
        assert_eq!(ln_binomial(5, 7), f64::NEG_INFINITY);
        assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-12);
        assert!((ln_binomial(52, 5) - 2_598_960f64.ln()).abs() < 1e-11);
    }

    #[test]
    fn erf_reference_points() {
        // The Chebyshev fit carries ~1.2e-7 of intrinsic error.
        assert!(erf(0.0).abs() < 2e-7);
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 2e-7);
        assert!((erf(-1.0) + 0.842_700_792_949_714_9).abs() < 2e-7);
        assert!((erfc(2.0) - 0.004_677_734_981_063_1).abs() < 1e-8);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 2e-7);
        assert!((normal_cdf(1.96) - 0.975_002_104_85).abs() < 1e-6);
        assert!((normal_cdf(-1.96) - 0.024_997_895_15).abs() < 1e-6);
    }

    #[test]
    fn ln1m_exp_matches_direct() {
        for &x in &[-0.3f64, -0.7, -5.0, -50.0] {
            let direct = (1.0 - x.exp()).ln();
            assert!((ln1m_exp(x) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
        // Tiny x, where the direct form cancels: ln(1 - e^x) ~ ln(-x).
        let x = -1e-12;
        assert!((ln1m_exp(x) - (-x as f64).ln()).abs() < 1e-9);
        assert_eq!(ln1m_exp(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn scaled_power_term_small_delta() {
        // (1 - 1e-30)^(1e20): exponent is -1e-10 to full relative accuracy.
        let v = scaled_ln_one_minus_exp((1e20f64).ln(), (1e-30f64).ln());
        assert!((v + 1e-10).abs() < 1e-24);
    }

    #[test]
    fn scaled_power_term_moderate_delta_matches_naive() {
        let v = scaled_ln_one_minus_exp(9f64.ln(), 0.09f64.ln());
        let naive = 9.0 * (1.0 - 0.09f64).ln();
        assert!((v - naive).abs() < 1e-12);
    }

    #[test]
    fn scaled_power_term_edge_cases() {
        assert_eq!(scaled_ln_one_minus_exp(f64::NEG_INFINITY, -1.0), 0.0);
        assert_eq!(scaled_ln_one_minus_exp(2.0, f64::NEG_INFINITY), 0.0);
        assert_eq!(scaled_ln_one_minus_exp(2.0, 0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn log_sum_exp_basics() {
        assert_eq!(log_sum_exp(vec![]), f64::NEG_INFINITY);
        assert_eq!(
            log_sum_exp(vec![f64::NEG_INFINITY, f64::NEG_INFINITY]),
            f64::NEG_INFINITY
        );
        let v = log_sum_exp(vec![0.5f64.ln(), 0.25f64.ln(), 0.25f64.ln()]);
        assert!(v.abs() < 1e-14);
        // Shift invariance at extreme magnitudes.
        let v = log_sum_exp(vec![-1000.0, -1001.0]);
        assert!((v - (-1000.0 + (1.0 + (-1.0f64).exp()).ln())).abs() < 1e-12);
    }

    #[test]
    fn neumaier_recovers_lost_bits() {
        let mut s = NeumaierSum::new();
        for &x in &[1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn ln_tiny_constant_matches() {
        assert!((LN_TINY - (1e-17f64).ln()).abs() < 1e-12);
    }
}
