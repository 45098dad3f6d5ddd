//! Exact front-membership probabilities for Bernoulli(p) coordinates.
//!
//! All probability formulas here are finite sums whose terms involve
//! `(1 - delta)^(n-1)` style powers, evaluated entirely in log space so
//! sweeps can reach `n ~ 10^300` without underflow. The independent
//! check for everything is [`brute_force_discrete`], a total enumeration
//! of coordinate configurations at desk scale.

use crate::distributions::DistributionSpec;
use crate::error::Error;
use crate::special::{ln1m_exp, ln_binomial, ln_factorial, log_sum_exp, scaled_ln_one_minus_exp};
use crate::types::{Flag, HugeN, LogProb};

/// Largest exact `n` accepted by [`variance_front_size`]: the `n(n-1)`
/// prefactor and the central subtraction demand linear-space arithmetic.
pub const VARIANCE_N_CAP: u64 = 1_000_000_000;

/// Configuration cap for [`brute_force_discrete`].
pub const BRUTE_FORCE_CONFIG_CAP: f64 = 1e7;

/// Which probability a [`BernoulliProbResult`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BernoulliKind {
    /// P(vector 1 is a strong maximum).
    Strong,
    /// P(vector 1 is a weak maximum).
    Weak,
    /// P(vectors 1 and 2 are both strong maxima).
    Pair,
}

impl std::fmt::Display for BernoulliKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BernoulliKind::Strong => "strong",
            BernoulliKind::Weak => "weak",
            BernoulliKind::Pair => "pair",
        };
        f.write_str(s)
    }
}

/// A log-space probability with its kind tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliProbResult {
    pub kind: BernoulliKind,
    pub log_p: LogProb,
}

/// Front-size variance in linear space, with a cancellation flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceResult {
    pub value: f64,
    pub flag: Flag,
}

/// Exact enumeration summary for small discrete samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceSummary {
    pub p_strong: f64,
    pub q_weak: f64,
    /// P(vectors 1 and 2 are both strong maxima); zero when n = 1.
    pub p_pair: f64,
    pub mean_front: f64,
    pub var_front: f64,
}

fn validate(k: u64, p: f64) -> Result<(), Error> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    if !(p > 0.0 && p < 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p must lie strictly inside (0,1), got {p}")));
    }
    Ok(())
}

/// Shared term machinery: sums `C(k,i) p^i (1-p)^(k-i) (1 - delta_i)^(n-1)`
/// over `i`, with the per-term `delta_i` supplied as a natural log.
fn binomial_mixture_log_sum(
    k: u64,
    n: HugeN,
    p: f64,
    ln_delta_at: impl Fn(u64, f64, f64) -> f64,
) -> f64 {
    let ln_n1 = n.ln_minus(1);
    if ln_n1 == f64::NEG_INFINITY {
        // Empty competitor set: the binomial masses sum to exactly 1.
        return 0.0;
    }
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let terms: Vec<f64> = (0..=k)
        .map(|i| {
            ln_binomial(k, i)
                + i as f64 * ln_p
                + (k - i) as f64 * ln_q
                + scaled_ln_one_minus_exp(ln_n1, ln_delta_at(i, ln_p, ln_q))
        })
        .collect();
    log_sum_exp(terms)
}

/// P(vector 1 is a strong maximum): total probability over the count of
/// ones in vector 1, with competitor-survival base `1 - p^i`. The `i = 0`
/// term vanishes for `n >= 2` (an all-zeros vector is always dominated).
pub fn p_bernoulli(k: u64, n: HugeN, p: f64) -> Result<BernoulliProbResult, Error> {
    validate(k, p)?;
    let log_p = binomial_mixture_log_sum(k, n, p, |i, ln_p, _| i as f64 * ln_p);
    Ok(BernoulliProbResult {
        kind: BernoulliKind::Strong,
        log_p: LogProb::new(log_p.min(0.0))?,
    })
}

/// Fixed-k leading term `p^k (1 - p^k)^(n-1)`: the `i = k` term of
/// [`p_bernoulli`], which dominates as `n` grows.
pub fn p_bernoulli_fixed_k_asymptotic(k: u64, n: HugeN, p: f64) -> Result<BernoulliProbResult, Error> {
    validate(k, p)?;
    let ln_p = p.ln();
    let log_p = k as f64 * ln_p + scaled_ln_one_minus_exp(n.ln_minus(1), k as f64 * ln_p);
    Ok(BernoulliProbResult {
        kind: BernoulliKind::Strong,
        log_p: LogProb::new(log_p.min(0.0))?,
    })
}

/// P(vector 1 is a weak maximum): same scheme with base
/// `1 - p^i (1 - (1-p)^(k-i))`. At `i = k` the base is 1, leaving the
/// constant term `p^k` that survives as `n` grows.
pub fn q_bernoulli(k: u64, n: HugeN, p: f64) -> Result<BernoulliProbResult, Error> {
    validate(k, p)?;
    let log_p = binomial_mixture_log_sum(k, n, p, |i, ln_p, ln_q| {
        i as f64 * ln_p + ln1m_exp((k - i) as f64 * ln_q)
    });
    Ok(BernoulliProbResult {
        kind: BernoulliKind::Weak,
        log_p: LogProb::new(log_p.min(0.0))?,
    })
}

/// One multinomial term of [`pair_prob`], in log space. The quartet
/// `(a, b, c, d)` counts coordinate patterns (00, 01, 10, 11) between the
/// two candidate vectors; the summand is symmetric in `b` and `c`.
fn pair_term(k: u64, ln_n2: f64, ln_p: f64, ln_q: f64, a: u64, b: u64, c: u64, d: u64) -> f64 {
    debug_assert_eq!(a + b + c + d, k);
    let ln_multinomial = ln_factorial(k)
        - ln_factorial(a)
        - ln_factorial(b)
        - ln_factorial(c)
        - ln_factorial(d);
    let ln_weight =
        a as f64 * 2.0 * ln_q + (b + c) as f64 * (ln_p + ln_q) + d as f64 * 2.0 * ln_p;
    // y = p^d (p^b + p^c - p^(b+c)) = p^d (e^B + e^C (1 - e^B)).
    let big_b = b as f64 * ln_p;
    let big_c = c as f64 * ln_p;
    let ln_y = d as f64 * ln_p + log_sum_exp(vec![big_b, big_c + ln1m_exp(big_b)]);
    ln_multinomial + ln_weight + scaled_ln_one_minus_exp(ln_n2, ln_y)
}

/// P(vectors 1 and 2 are both strong maxima), summed over quartet
/// compositions with `b, c >= 1`. For `k = 1` no composition exists and
/// the probability is exactly zero. O(k^3) compositions; callers should
/// expect a noticeable cost beyond k ~ 400.
pub fn pair_prob(k: u64, n: HugeN, p: f64) -> Result<BernoulliProbResult, Error> {
    validate(k.max(1), p)?;
    // Two distinct strong maxima need opposite-pattern coordinates (k >= 2)
    // and a second vector (n >= 2); otherwise the event is empty.
    if k < 2 || n.ln() < std::f64::consts::LN_2 - 1e-12 {
        return Ok(BernoulliProbResult {
            kind: BernoulliKind::Pair,
            log_p: LogProb::ZERO,
        });
    }
    let ln_n2 = n.ln_minus(2);
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let mut terms = Vec::new();
    for a in 0..=(k - 2) {
        for b in 1..=(k - 1 - a) {
            for c in 1..=(k - a - b) {
                let d = k - a - b - c;
                terms.push(pair_term(k, ln_n2, ln_p, ln_q, a, b, c, d));
            }
        }
    }
    let log_p = log_sum_exp(terms);
    Ok(BernoulliProbResult {
        kind: BernoulliKind::Pair,
        log_p: LogProb::new(log_p.min(0.0))?,
    })
}

/// Variance of the strong-front size,
/// `n P (1-P) + n(n-1) (E[1 and 2 both maxima] - P^2)`.
///
/// Requires an exact integer `n`: the prefactors and the central
/// subtraction cannot be carried out in log space. The subtraction is
/// monitored; losing more than eight significant digits raises
/// [`Flag::Cancellation`].
pub fn variance_front_size(k: u64, n: u64, p: f64) -> Result<VarianceResult, Error> {
    validate(k, p)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if n > VARIANCE_N_CAP {
        return Err(Error::ResourceLimit(format!(
            "variance needs exact-n arithmetic; n = {n} exceeds cap {VARIANCE_N_CAP}"
        )));
    }
    let huge = HugeN::Exact(n);
    let prob = p_bernoulli(k, huge, p)?.log_p.prob();
    let both = pair_prob(k, huge, p)?.log_p.prob();
    let nf = n as f64;
    let centered = both - prob * prob;
    let binomial_part = nf * prob * (1.0 - prob);
    let pair_part = nf * (nf - 1.0) * centered;
    let value = binomial_part + pair_part;

    let mut flag = Flag::Ok;
    let inner_scale = both.max(prob * prob);
    if inner_scale > 0.0 && centered.abs() < inner_scale * 1e-8 {
        flag = Flag::Cancellation;
    }
    let outer_scale = binomial_part.abs().max(pair_part.abs());
    if outer_scale > 0.0 && value.abs() < outer_scale * 1e-8 {
        flag = Flag::Cancellation;
    }
    Ok(VarianceResult { value, flag })
}

/// Exact enumeration over all `|support|^(k n)` coordinate configurations,
/// weighted by product probabilities. The dominance checks are written out
/// directly from the definitions so this oracle shares nothing with the
/// formulas it validates.
pub fn brute_force_discrete(
    k: u64,
    n: u64,
    d: &DistributionSpec,
) -> Result<BruteForceSummary, Error> {
    let (values, probs): (Vec<f64>, Vec<f64>) = match d {
        DistributionSpec::Bernoulli { p } => (vec![0.0, 1.0], vec![1.0 - p, *p]),
        DistributionSpec::FiniteDiscrete { values, probs } => (values.clone(), probs.clone()),
        _ => {
            return Err(Error::Domain(
                "brute force enumeration needs a finitely supported law".into(),
            ))
        }
    };
    if k == 0 || n == 0 {
        return Err(Error::Domain("k and n must be >= 1".into()));
    }
    let m = values.len();
    let cells = (k * n) as usize;
    if cells as f64 * (m as f64).ln() > BRUTE_FORCE_CONFIG_CAP.ln() {
        return Err(Error::ResourceLimit(format!(
            "{m}^{cells} configurations exceed the {BRUTE_FORCE_CONFIG_CAP:.0e} cap"
        )));
    }

    let kk = k as usize;
    let nn = n as usize;
    let mut digits = vec![0usize; cells];
    let mut entries = vec![values[0]; cells]; // row-major: entries[i*k + j]
    let mut p_strong = 0.0;
    let mut q_weak = 0.0;
    let mut p_pair = 0.0;
    let mut mean = 0.0;
    let mut second = 0.0;

    loop {
        let weight: f64 = digits.iter().map(|&d| probs[d]).product();

        let mut front_size = 0usize;
        let mut one_strong = false;
        let mut two_strong = false;
        let mut one_weak = false;
        for i in 0..nn {
            let xi = &entries[i * kk..(i + 1) * kk];
            let mut weakly_dominated = false;
            let mut strictly_dominated = false;
            for j in 0..nn {
                if i == j {
                    continue;
                }
                let xj = &entries[j * kk..(j + 1) * kk];
                let le_all = xi.iter().zip(xj).all(|(a, b)| a <= b);
                if le_all {
                    weakly_dominated = true;
                    if xi.iter().zip(xj).any(|(a, b)| a < b) {
                        strictly_dominated = true;
                        break;
                    }
                }
            }
            if !weakly_dominated {
                front_size += 1;
                if i == 0 {
                    one_strong = true;
                }
                if i == 1 {
                    two_strong = true;
                }
            }
            if !strictly_dominated && i == 0 {
                one_weak = true;
            }
        }

        if one_strong {
            p_strong += weight;
            if two_strong {
                p_pair += weight;
            }
        }
        if one_weak {
            q_weak += weight;
        }
        mean += weight * front_size as f64;
        second += weight * (front_size * front_size) as f64;

        // Odometer step.
        let mut pos = 0;
        loop {
            if pos == cells {
                return Ok(BruteForceSummary {
                    p_strong,
                    q_weak,
                    p_pair,
                    mean_front: mean,
                    var_front: second - mean * mean,
                });
            }
            digits[pos] += 1;
            if digits[pos] < m {
                entries[pos] = values[digits[pos]];
                break;
            }
            digits[pos] = 0;
            entries[pos] = values[0];
            pos += 1;
        }
    }
}
