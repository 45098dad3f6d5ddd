//! Front-membership probability `p(k, n)` for continuous coordinate laws.
//!
//! Every continuous law gives the same value, so no distribution argument
//! appears here. Four routes check each other:
//!
//! - [`p_recurrence`]: the O(k n) prefix-sum recurrence, the workhorse.
//! - [`p_alternating`]: the alternating binomial sum, in a float mode that
//!   *measures* its own cancellation (the sum is famously unstable) and an
//!   exact big-rational mode.
//! - [`p_nested_oracle`]: brute enumeration of the nested-sum identity,
//!   usable only at desk scale.
//! - [`p_fixed_k_asymptotic`] and [`p_hwang`]: the fixed-k and
//!   uniform-in-k first-order approximations.

use crate::error::Error;
use crate::special::{ln_factorial, ln_gamma, normal_cdf, NeumaierSum};
use crate::types::{Flag, HugeN, LogProb};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Largest `n` accepted by the recurrence (one f64 row is retained).
pub const RECURRENCE_N_CAP: u64 = 100_000_000;

/// Largest `n` accepted by the exact-rational alternating sum.
pub const RATIONAL_N_CAP: u64 = 2000;

/// Largest tuple count enumerated by the nested oracle.
pub const ORACLE_TUPLE_CAP: f64 = 1e7;

/// Cancellation (in ulps of the result) beyond which the float-mode
/// alternating sum is flagged unreliable.
pub const CANCELLATION_ULPS_LIMIT: f64 = 1e6;

/// Which computation produced a [`ContinuousProbResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuousMethod {
    Recurrence,
    AlternatingFloat,
    AlternatingRational,
    NestedOracle,
    FixedKAsymptotic,
    Hwang,
}

impl std::fmt::Display for ContinuousMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ContinuousMethod::Recurrence => "rec",
            ContinuousMethod::AlternatingFloat => "alt",
            ContinuousMethod::AlternatingRational => "alt-exact",
            ContinuousMethod::NestedOracle => "oracle",
            ContinuousMethod::FixedKAsymptotic => "asym",
            ContinuousMethod::Hwang => "hwang",
        };
        f.write_str(s)
    }
}

/// Which of the three asymptotic regimes a Hwang evaluation fell in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwangRegime {
    /// `k` well below `log n`: saddle-point correction to the fixed-k form.
    Saddle,
    /// `k` near `log n`: normal CDF of the standardized distance.
    Gaussian,
    /// `k` well above `log n`: probability one.
    Upper,
}

impl std::fmt::Display for HwangRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HwangRegime::Saddle => "saddle",
            HwangRegime::Gaussian => "gaussian",
            HwangRegime::Upper => "upper",
        };
        f.write_str(s)
    }
}

/// A continuous-case probability with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousProbResult {
    pub log_p: LogProb,
    pub method: ContinuousMethod,
    /// Set only by [`p_hwang`].
    pub regime: Option<HwangRegime>,
    pub flag: Flag,
    /// Float-mode alternating sum only: estimated error amplification, in
    /// ulps of the result (the classical condition number of the sum).
    pub cancellation_ulps: Option<f64>,
}

impl ContinuousProbResult {
    fn plain(log_p: LogProb, method: ContinuousMethod) -> Self {
        ContinuousProbResult {
            log_p,
            method,
            regime: None,
            flag: Flag::Ok,
            cancellation_ulps: None,
        }
    }
}

fn validate_kn(k: u64, n: u64) -> Result<(), Error> {
    if k == 0 || n == 0 {
        return Err(Error::Domain(format!("k and n must be >= 1, got k={k}, n={n}")));
    }
    Ok(())
}

/// Exact double-precision evaluation through the prefix-sum recurrence:
/// `p(1, u) = 1/u` and `p(k, u) = (1/u) * sum_{w<=u} p(k-1, w)`.
/// All terms are positive, so plain summation keeps full accuracy.
/// O(k n) time, O(n) memory.
pub fn p_recurrence(k: u64, n: u64) -> Result<ContinuousProbResult, Error> {
    validate_kn(k, n)?;
    if n > RECURRENCE_N_CAP {
        return Err(Error::ResourceLimit(format!(
            "recurrence needs an f64 row of length n = {n} > {RECURRENCE_N_CAP}"
        )));
    }
    let len = n as usize;
    let mut row = vec![0.0f64; len];
    for (u, slot) in row.iter_mut().enumerate() {
        *slot = 1.0 / (u + 1) as f64;
    }
    for _ in 2..=k {
        let mut acc = 0.0f64;
        for (u, slot) in row.iter_mut().enumerate() {
            acc += *slot;
            *slot = acc / (u + 1) as f64;
        }
    }
    let p = row[len - 1];
    Ok(ContinuousProbResult::plain(
        LogProb::new(p.ln())?,
        ContinuousMethod::Recurrence,
    ))
}

/// Evaluation mode for [`p_alternating`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlternatingMode {
    /// Compensated float summation with tracked cancellation.
    FloatCompensated,
    /// Exact big-rational arithmetic (n capped, binomials get large).
    ExactRational,
}

/// The alternating binomial sum `sum_u C(n-1, u-1) (-1)^(u-1) / u^k`.
///
/// The float mode reproduces the sum's numerical instability honestly: it
/// tracks the condition number `sum|t| / |sum t|` and flags the result
/// [`Flag::Unreliable`] once more than a million ulps of the result are
/// lost to cancellation, instead of returning silently wrong digits.
pub fn p_alternating(k: u64, n: u64, mode: AlternatingMode) -> Result<ContinuousProbResult, Error> {
    validate_kn(k, n)?;
    match mode {
        AlternatingMode::FloatCompensated => alternating_float(k, n),
        AlternatingMode::ExactRational => {
            if n > RATIONAL_N_CAP {
                return Err(Error::ResourceLimit(format!(
                    "exact-rational mode capped at n = {RATIONAL_N_CAP}, got {n}"
                )));
            }
            let r = alternating_exact_rational(k, n);
            Ok(ContinuousProbResult::plain(
                LogProb::new(ln_big_rational(&r))?,
                ContinuousMethod::AlternatingRational,
            ))
        }
    }
}

fn alternating_float(k: u64, n: u64) -> Result<ContinuousProbResult, Error> {
    // Work scaled by the largest term magnitude so binomials beyond f64
    // range still sum; ln C(n-1, u-1) is updated incrementally.
    let kf = k as f64;
    let mut ln_c = 0.0f64;
    let mut ln_terms = Vec::with_capacity(n as usize);
    let mut max_ln = f64::NEG_INFINITY;
    for u in 1..=n {
        let lt = ln_c - kf * (u as f64).ln();
        max_ln = max_ln.max(lt);
        ln_terms.push(lt);
        ln_c += ((n - u) as f64 / u as f64).ln();
    }
    let mut sum = NeumaierSum::new();
    let mut abs_sum = 0.0f64;
    for (i, lt) in ln_terms.iter().enumerate() {
        let mag = (lt - max_ln).exp();
        abs_sum += mag;
        sum.add(if i % 2 == 0 { mag } else { -mag });
    }
    let scaled = sum.value();
    let (log_p, flag, ulps) = if scaled <= 0.0 {
        // Cancellation swallowed the value entirely; report a zero
        // probability and let the flag carry the verdict.
        (LogProb::ZERO, Flag::Unreliable, f64::INFINITY)
    } else {
        let ulps = abs_sum / scaled;
        let log_p = LogProb::new((max_ln + scaled.ln()).min(0.0))?;
        let flag = if ulps > CANCELLATION_ULPS_LIMIT {
            Flag::Unreliable
        } else {
            Flag::Ok
        };
        (log_p, flag, ulps)
    };
    Ok(ContinuousProbResult {
        log_p,
        method: ContinuousMethod::AlternatingFloat,
        regime: None,
        flag,
        cancellation_ulps: Some(ulps),
    })
}

/// Exact rational value of the alternating sum.
pub(crate) fn alternating_exact_rational(k: u64, n: u64) -> BigRational {
    let mut total = BigRational::zero();
    let mut binom = BigUint::from(1u32);
    for u in 1..=n {
        let num = BigInt::from(binom.clone()) * if u % 2 == 1 { 1 } else { -1 };
        let den = BigInt::from(BigUint::from(u).pow(k as u32));
        total += BigRational::new(num, den);
        // C(n-1, u) from C(n-1, u-1); exact by construction.
        binom = binom * BigUint::from(n - u) / BigUint::from(u);
    }
    total
}

/// Natural log of a positive big rational to ~1e-14 absolute accuracy.
///
/// The quotient is first scaled to ~80 significant bits by one exact
/// integer division, so the result does not accumulate the shift-count
/// rounding that logging numerator and denominator separately would.
fn ln_big_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log of a non-positive rational");
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let shift = den.bits() as i64 - num.bits() as i64 + 80;
    let scaled = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let bits = scaled.bits();
    let (top, extra) = if bits <= 53 {
        (scaled.to_f64().expect("fits f64"), 0)
    } else {
        ((&scaled >> (bits - 53)).to_f64().expect("fits f64"), bits - 53)
    };
    top.ln() + (extra as f64 - shift as f64) * std::f64::consts::LN_2
}

/// Direct enumeration of the nested-sum identity: `p(k, n)` equals `1/n`
/// times the sum of `1/(u_1 ... u_{k-1})` over weakly increasing tuples
/// bounded by `n`. Desk-scale oracle; the tuple count is capped.
pub fn p_nested_oracle(k: u64, n: u64) -> Result<ContinuousProbResult, Error> {
    validate_kn(k, n)?;
    let tuples = binomial_f64(n + k - 2, k - 1);
    if tuples > ORACLE_TUPLE_CAP {
        return Err(Error::ResourceLimit(format!(
            "nested oracle would enumerate {tuples:.3e} tuples (cap {ORACLE_TUPLE_CAP:.0e})"
        )));
    }
    let mut total = NeumaierSum::new();
    enumerate_tuples(k - 1, 1, n, 1.0, &mut total);
    let p = total.value() / n as f64;
    Ok(ContinuousProbResult::plain(
        LogProb::new(p.ln().min(0.0))?,
        ContinuousMethod::NestedOracle,
    ))
}

fn enumerate_tuples(levels: u64, min_u: u64, n: u64, partial: f64, total: &mut NeumaierSum) {
    if levels == 0 {
        total.add(partial);
        return;
    }
    for u in min_u..=n {
        enumerate_tuples(levels - 1, u, n, partial / u as f64, total);
    }
}

fn binomial_f64(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0f64;
    for j in 0..k {
        c = c * (n - j) as f64 / (j + 1) as f64;
        if c > 1e18 {
            return c; // far beyond any cap; avoid overflow concerns
        }
    }
    c
}

/// Fixed-k growth rate `log^(k-1)(n) / (n (k-1)!)`, evaluated in log space.
/// For `k = 1` this is exactly `1/n`.
pub fn p_fixed_k_asymptotic(k: u64, n: HugeN) -> Result<ContinuousProbResult, Error> {
    let ln_n = n.ln();
    if k == 0 || ln_n < std::f64::consts::LN_2 {
        return Err(Error::Domain(format!(
            "fixed-k asymptotic needs k >= 1 and n >= 2, got k={k}, ln n={ln_n}"
        )));
    }
    let log_p = (k - 1) as f64 * ln_n.ln() - ln_n - ln_factorial(k - 1);
    Ok(ContinuousProbResult::plain(
        LogProb::new(log_p.min(0.0))?,
        ContinuousMethod::FixedKAsymptotic,
    ))
}

/// Standardized distance at which the Hwang classification switches
/// between regimes. The source regimes are asymptotic relations; a
/// deterministic cutoff is required and `|d| = 2` places the Gaussian
/// window where the two outer forms are least accurate.
pub const HWANG_REGIME_CUTOFF: f64 = 2.0;

/// First-order uniform approximation of `p(k, n)` with three regimes
/// keyed on `d = (k - log n) / sqrt(log n)`.
///
/// The gamma-function pole at `k = log n` is unreachable: the saddle
/// branch requires `d <= -2`, which keeps its argument inside (0, 1).
pub fn p_hwang(k: u64, n: HugeN) -> Result<ContinuousProbResult, Error> {
    let ln_n = n.ln();
    if k == 0 || ln_n < 3f64.ln() - 1e-12 {
        return Err(Error::Domain(format!(
            "hwang approximation needs k >= 1 and n >= 3, got k={k}, ln n={ln_n}"
        )));
    }
    let d = (k as f64 - ln_n) / ln_n.sqrt();
    let (log_p, regime) = if d <= -HWANG_REGIME_CUTOFF {
        let log_p = (k - 1) as f64 * ln_n.ln() - ln_n - ln_factorial(k - 1)
            + ln_gamma(1.0 - k as f64 / ln_n);
        (log_p, HwangRegime::Saddle)
    } else if d < HWANG_REGIME_CUTOFF {
        (normal_cdf(d).ln(), HwangRegime::Gaussian)
    } else {
        (0.0, HwangRegime::Upper)
    };
    Ok(ContinuousProbResult {
        log_p: LogProb::new(log_p.min(0.0))?,
        method: ContinuousMethod::Hwang,
        regime: Some(regime),
        flag: Flag::Ok,
        cancellation_ulps: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob(r: &ContinuousProbResult) -> f64 {
        r.log_p.prob()
    }

    #[test]
    fn recurrence_base_cases() {
        assert_eq!(prob(&p_recurrence(1, 5).unwrap()), 1.0 / 5.0);
        assert_eq!(prob(&p_recurrence(3, 1).unwrap()), 1.0);
        // Hand recurrence: (1/3)(1 + 1/2 + 1/3) = 11/18.
        assert!((prob(&p_recurrence(2, 3).unwrap()) - 11.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_single_vector_always_max() {
        for k in 1..=50 {
            assert_eq!(prob(&p_recurrence(k, 1).unwrap()), 1.0);
        }
    }

    #[test]
    fn recurrence_validates_inputs() {
        assert!(p_recurrence(0, 5).is_err());
        assert!(p_recurrence(2, 0).is_err());
        assert!(matches!(
            p_recurrence(2, RECURRENCE_N_CAP + 1),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn alternating_small_values() {
        // 1 - 1/4 and 1 - 2/4 + 1/9, also checkable by brute force over
        // coordinate orderings.
        let f = p_alternating(2, 2, AlternatingMode::FloatCompensated).unwrap();
        assert!((prob(&f) - 0.75).abs() < 1e-14);
        assert!(f.flag.is_ok());
        let f = p_alternating(2, 3, AlternatingMode::FloatCompensated).unwrap();
        assert!((prob(&f) - 11.0 / 18.0).abs() < 1e-14);
    }

    #[test]
    fn alternating_rational_is_exact() {
        let r = alternating_exact_rational(2, 3);
        assert_eq!(r, BigRational::new(BigInt::from(11), BigInt::from(18)));
        let r = alternating_exact_rational(2, 2);
        assert_eq!(r, BigRational::new(BigInt::from(3), BigInt::from(4)));
    }

    #[test]
    fn alternating_float_flags_instability_at_10_500() {
        let f = p_alternating(10, 500, AlternatingMode::FloatCompensated).unwrap();
        assert_eq!(f.flag, Flag::Unreliable);
        assert!(f.cancellation_ulps.unwrap() > CANCELLATION_ULPS_LIMIT);
        // The rational route stays finite and matches the recurrence.
        let exact = p_alternating(10, 500, AlternatingMode::ExactRational).unwrap();
        let rec = p_recurrence(10, 500).unwrap();
        let rel = (exact.log_p.ln() - rec.log_p.ln()).abs() / rec.log_p.ln().abs();
        assert!(rel < 1e-12, "relative log gap {rel}");
        assert!(exact.flag.is_ok());
    }

    #[test]
    fn alternating_rational_cap() {
        assert!(matches!(
            p_alternating(3, RATIONAL_N_CAP + 1, AlternatingMode::ExactRational),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn nested_oracle_hand_values() {
        // k=2, n=2: (1/2)(1 + 1/2); k=3, n=2: (1/2)(1 + 1/2 + 1/4).
        assert!((prob(&p_nested_oracle(2, 2).unwrap()) - 0.75).abs() < 1e-15);
        assert!((prob(&p_nested_oracle(3, 2).unwrap()) - 7.0 / 8.0).abs() < 1e-15);
        for n in [1u64, 7, 100] {
            let r = p_nested_oracle(1, n).unwrap();
            assert!((prob(&r) - 1.0 / n as f64).abs() < 1e-16);
        }
    }

    #[test]
    fn nested_oracle_cap() {
        assert!(matches!(
            p_nested_oracle(12, 1000),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn triple_equality_on_a_small_grid() {
        for k in 1..=4 {
            for n in 1..=20 {
                let a = p_recurrence(k, n).unwrap().log_p.ln();
                let b = p_alternating(k, n, AlternatingMode::ExactRational)
                    .unwrap()
                    .log_p
                    .ln();
                let c = p_nested_oracle(k, n).unwrap().log_p.ln();
                let scale = a.abs().max(1e-300);
                assert!((a - b).abs() / scale.max(1.0) < 1e-12, "k={k} n={n}");
                assert!((a - c).abs() / scale.max(1.0) < 1e-12, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn fixed_k_asymptotic_values() {
        // k=1 reduces to exactly 1/n in log space.
        let r = p_fixed_k_asymptotic(1, HugeN::Exact(1000)).unwrap();
        assert_eq!(r.log_p.ln(), -(1000f64).ln());
        // k=2 at n = round(e^10): close to 10 / e^10.
        let n = (10f64).exp().round() as u64;
        let r = p_fixed_k_asymptotic(2, HugeN::Exact(n)).unwrap();
        let expected = 10.0 / (10f64).exp();
        assert!((prob(&r) - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn recurrence_approaches_fixed_k_asymptotic() {
        let mut prev_ratio = f64::INFINITY;
        for &n in &[1_000u64, 10_000, 100_000, 1_000_000] {
            let exact = prob(&p_recurrence(2, n).unwrap());
            let asym = prob(&p_fixed_k_asymptotic(2, HugeN::Exact(n)).unwrap());
            let ratio = exact / asym;
            assert!(ratio > 1.0, "H_n/ln n should stay above 1");
            assert!(ratio < prev_ratio, "ratio should fall toward 1");
            prev_ratio = ratio;
        }
        assert!((prev_ratio - 1.0) < 0.05);
    }

    #[test]
    fn hwang_middle_regime_near_half() {
        let n = 1_000_000u64;
        let k = (n as f64).ln().round() as u64;
        let r = p_hwang(k, HugeN::Exact(n)).unwrap();
        assert_eq!(r.regime, Some(HwangRegime::Gaussian));
        let p = prob(&r);
        assert!((0.4..=0.6).contains(&p), "middle-regime value {p}");
    }

    #[test]
    fn hwang_saddle_gamma_half_multiplier() {
        // ln n = 100 passed directly, k = 50: the saddle multiplier is
        // Gamma(1/2) = sqrt(pi).
        let n = HugeN::from_log10(100.0 / std::f64::consts::LN_10).unwrap();
        let r = p_hwang(50, n).unwrap();
        assert_eq!(r.regime, Some(HwangRegime::Saddle));
        let base = 49.0 * 100f64.ln() - 100.0 - ln_factorial(49);
        let multiplier = r.log_p.ln() - base;
        assert!((multiplier - std::f64::consts::PI.sqrt().ln()).abs() < 1e-10);
    }

    #[test]
    fn hwang_upper_regime_is_one() {
        // k far above log n.
        let r = p_hwang(60, HugeN::Exact(1000)).unwrap();
        assert_eq!(r.regime, Some(HwangRegime::Upper));
        assert_eq!(r.log_p.ln(), 0.0);
    }

    #[test]
    fn hwang_requires_n_at_least_3() {
        assert!(p_hwang(2, HugeN::Exact(2)).is_err());
        assert!(p_hwang(2, HugeN::Exact(3)).is_ok());
    }

    #[test]
    fn monotone_in_k_and_n() {
        // p(k, n) <= p(k+1, n) and p(k, n+1) <= p(k, n); modest grid here,
        // the full k <= 8, n <= 1e4 grid runs in the integration suite.
        let n_max = 200u64;
        let mut prev_row: Option<Vec<f64>> = None;
        for k in 1..=8 {
            let row: Vec<f64> = (1..=n_max)
                .map(|n| p_recurrence(k, n).unwrap().log_p.prob())
                .collect();
            for w in row.windows(2) {
                assert!(w[1] <= w[0] + 1e-15);
            }
            if let Some(prev) = &prev_row {
                for (lo, hi) in prev.iter().zip(&row) {
                    assert!(lo <= hi);
                }
            }
            prev_row = Some(row);
        }
    }
}
