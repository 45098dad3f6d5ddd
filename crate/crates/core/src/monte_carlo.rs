//! Simulation engine: sample generation, Pareto-front computation,
//! membership estimators, the prefix-domination statistic, quantile
//! coupling, and the geometric-maximum limit experiment.
//!
//! Seed discipline: estimators take one root seed; every replication runs
//! on its own counter-derived ChaCha stream, so parallel and serial runs
//! produce identical results and merged estimates are order-independent.

use crate::distributions::DistributionSpec;
use crate::error::Error;
use crate::types::LogProb;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Entry cap for materialized sample matrices (~400 MB of f64).
pub const SAMPLE_ENTRY_CAP: u64 = 50_000_000;

/// Hard ceiling for geometric widening of the prefix width.
pub const PREFIX_WIDTH_CAP: usize = 4096;

/// Streams per replication reserved for censoring retries.
const WIDEN_ATTEMPTS: u64 = 16;

/// An n-by-k matrix of realized coordinates, row i = vector i.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    n: usize,
    k: usize,
    entries: Vec<f64>, // row-major
}

impl SampleMatrix {
    pub fn from_entries(n: usize, k: usize, entries: Vec<f64>) -> Result<Self, Error> {
        if n == 0 || k == 0 {
            return Err(Error::Domain(format!(
                "sample dimensions must be positive, got n={n}, k={k}"
            )));
        }
        if entries.len() != n * k {
            return Err(Error::Domain(format!(
                "expected {} entries, got {}",
                n * k,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("sample entries must be finite".into()));
        }
        Ok(SampleMatrix { n, k, entries })
    }

    /// Convenience constructor from explicit rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Self::from_entries(n, k, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Applies a map entrywise, reusing the dimensions.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, Error> {
        Self::from_entries(self.n, self.k, self.entries.iter().map(|&x| f(x)).collect())
    }
}

/// Index sets of the strong and weak fronts of one sample (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontResult {
    pub strong: Vec<usize>,
    pub weak: Vec<usize>,
}

/// A Bernoulli-outcome estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    pub estimate: f64,
    pub std_error: f64,
    pub reps: u64,
}

impl EstimateWithError {
    fn from_successes(successes: u64, reps: u64) -> Self {
        let estimate = successes as f64 / reps as f64;
        EstimateWithError {
            estimate,
            std_error: (estimate * (1.0 - estimate) / reps as f64).sqrt(),
            reps,
        }
    }
}

/// Median of a ratio statistic with a bootstrap standard error and the
/// raw per-replication ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioEstimate {
    pub median: f64,
    pub std_error: f64,
    pub reps: u64,
    pub ratios: Vec<f64>,
}

/// Which front an estimator targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontKind {
    Strong,
    Weak,
}

impl std::fmt::Display for FrontKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FrontKind::Strong => "strong",
            FrontKind::Weak => "weak",
        })
    }
}

/// The RNG for one replication: a fixed root seed with a counter-derived
/// stream, so results do not depend on scheduling.
pub fn replication_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Fills an n-by-k matrix with iid draws, row by row.
pub fn generate_sample<R: Rng + ?Sized>(
    d: &DistributionSpec,
    k: u64,
    n: u64,
    rng: &mut R,
) -> Result<SampleMatrix, Error> {
    if k == 0 || n == 0 {
        return Err(Error::Domain(format!(
            "sample dimensions must be positive, got n={n}, k={k}"
        )));
    }
    if n.saturating_mul(k) > SAMPLE_ENTRY_CAP {
        return Err(Error::ResourceLimit(format!(
            "sample of {n} x {k} entries exceeds cap {SAMPLE_ENTRY_CAP}"
        )));
    }
    let entries: Vec<f64> = (0..n * k).map(|_| d.sample(rng)).collect();
    SampleMatrix::from_entries(n as usize, k as usize, entries)
}

/// `a` weakly dominated by `b` under the product order: `a_j <= b_j` for
/// every coordinate.
fn weakly_dominated(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Strict product dominance: weakly dominated with at least one strict
/// coordinate.
fn strictly_dominated(a: &[f64], b: &[f64]) -> bool {
    weakly_dominated(a, b) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Strong front by the definition: i survives iff no other row weakly
/// dominates it. Duplicate rows eliminate each other. Reference
/// implementation, O(n^2 k) with early exit.
pub fn strong_front(m: &SampleMatrix) -> Vec<usize> {
    (0..m.n)
        .filter(|&i| {
            let xi = m.row(i);
            !(0..m.n).any(|j| j != i && weakly_dominated(xi, m.row(j)))
        })
        .collect()
}

/// Weak front: i survives iff no other row strictly dominates it. Equal
/// duplicates survive here.
pub fn weak_front(m: &SampleMatrix) -> Vec<usize> {
    (0..m.n)
        .filter(|&i| {
            let xi = m.row(i);
            !(0..m.n).any(|j| j != i && strictly_dominated(xi, m.row(j)))
        })
        .collect()
}

/// Both fronts of one sample.
pub fn fronts(m: &SampleMatrix) -> FrontResult {
    FrontResult {
        strong: strong_front(m),
        weak: weak_front(m),
    }
}

/// Strong front with sort-and-prune: identical output to [`strong_front`].
///
/// Rows are grouped by value (duplicates can never be maxima but still
/// dominate others, so one representative stays in the dominator pool),
/// then processed in decreasing coordinate-sum order. A dominator always
/// has strictly larger sum, so checking candidates against the running
/// pool of undominated representatives is sufficient, by transitivity.
pub fn strong_front_fast(m: &SampleMatrix) -> Vec<usize> {
    let n = m.n;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| {
        m.row(a)
            .iter()
            .zip(m.row(b))
            .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    // One representative per distinct row value, with uniqueness flag.
    let mut reps: Vec<(usize, bool)> = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && m.row(order[i]) == m.row(order[j]) {
            j += 1;
        }
        reps.push((order[i], j - i == 1));
        i = j;
    }

    let sums: Vec<f64> = (0..n).map(|i| m.row(i).iter().sum()).collect();
    reps.sort_unstable_by(|&(a, _), &(b, _)| {
        sums[b].partial_cmp(&sums[a]).unwrap().then(a.cmp(&b))
    });

    let mut pool: Vec<usize> = Vec::new();
    let mut front: Vec<usize> = Vec::new();
    for &(idx, unique) in &reps {
        let xi = m.row(idx);
        let dominated = pool.iter().any(|&j| weakly_dominated(xi, m.row(j)));
        if !dominated {
            pool.push(idx);
            if unique {
                front.push(idx);
            }
        }
    }
    front.sort_unstable();
    front
}

/// Membership of vector 1 (index 0) in the requested front, checked
/// pairwise against the other rows only. Equivalent to computing the full
/// front and testing membership, at O(n k).
pub fn first_vector_in_front(m: &SampleMatrix, kind: FrontKind) -> bool {
    let x0 = m.row(0);
    match kind {
        FrontKind::Strong => !(1..m.n).any(|j| weakly_dominated(x0, m.row(j))),
        FrontKind::Weak => !(1..m.n).any(|j| strictly_dominated(x0, m.row(j))),
    }
}

/// Fraction of replications in which vector 1 lies in the requested front.
pub fn estimate_p(
    d: &DistributionSpec,
    k: u64,
    n: u64,
    reps: u64,
    seed: u64,
    kind: FrontKind,
) -> Result<EstimateWithError, Error> {
    if reps < 100 {
        return Err(Error::Domain(format!(
            "front-membership estimation needs reps >= 100, got {reps}"
        )));
    }
    // Validate dimensions once up front rather than per replication.
    generate_sample(d, k, n, &mut replication_rng(seed, 0))?;
    let successes: u64 = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_rng(seed, rep);
            let m = generate_sample(d, k, n, &mut rng).expect("validated dims");
            u64::from(first_vector_in_front(&m, kind))
        })
        .sum();
    Ok(EstimateWithError::from_successes(successes, reps))
}

/// Outcome of the prefix-domination scan over a width-w sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixDominationMax {
    /// Every competitor is beaten within the available width; the value is
    /// the largest per-competitor count of leading coordinates on which
    /// vector 1 does not yet strictly beat it.
    Determined(u64),
    /// Some competitor is unbeaten across all available coordinates, so
    /// the statistic is only known to be at least the width.
    RightCensored { width: usize },
}

impl PrefixDominationMax {
    /// Membership of vector 1 in the strong front of the width-`w` prefix:
    /// the statistic must be strictly below `w`. A censored scan means an
    /// unbeaten competitor weakly dominates vector 1 on every prefix.
    pub fn first_vector_in_front(&self, width: usize) -> bool {
        match *self {
            PrefixDominationMax::Determined(m) => (m as usize) < width,
            PrefixDominationMax::RightCensored { width: w } => {
                debug_assert!(width <= w, "membership query beyond sampled width");
                false
            }
        }
    }
}

/// Scans each competitor for the first coordinate where vector 1 strictly
/// beats it and returns the maximum of (first-beat index - 1); an empty
/// competitor set gives zero.
///
/// The orientation matters: vector 1 stays in the strong front of the
/// width-w prefix exactly while it has strictly beaten every competitor
/// somewhere inside the prefix, i.e. while the returned maximum is < w.
pub fn prefix_domination_max(m: &SampleMatrix) -> PrefixDominationMax {
    let first = m.row(0);
    let mut g_max = 0u64;
    for i in 1..m.n {
        let row = m.row(i);
        match first.iter().zip(row).position(|(a, b)| a > b) {
            Some(j) => g_max = g_max.max(j as u64),
            None => return PrefixDominationMax::RightCensored { width: m.k },
        }
    }
    PrefixDominationMax::Determined(g_max)
}

/// Per-replication maxima of `n - 1` iid geometric draws (failures before
/// the first success, success probability `alpha`), each divided by
/// `log n`.
pub fn ferguson_max_ratio(
    alpha: f64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<Vec<f64>, Error> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if n < 2 {
        return Err(Error::Domain(format!("ferguson ratio needs n >= 2, got {n}")));
    }
    let ln_n = (n as f64).ln();
    let ln_fail = (-alpha).ln_1p();
    let ratios: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_rng(seed, rep);
            let mut max_g = 0u64;
            for _ in 1..n {
                let u: f64 = rng.sample(rand::distributions::Open01);
                let g = (u.ln() / ln_fail).floor() as u64;
                max_g = max_g.max(g);
            }
            max_g as f64 / ln_n
        })
        .collect();
    Ok(ratios)
}

/// The three coupled fronts of one shared-uniform sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledFronts {
    /// Strong front of the uniform matrix.
    pub front_u: Vec<usize>,
    /// Strong front after the quantile map to the target law.
    pub front_f: Vec<usize>,
    /// Strong front after thresholding to a Bernoulli matrix.
    pub front_b: Vec<usize>,
}

/// Draws one uniform matrix, pushes it through the quantile map of `d`
/// and through the indicator `x > threshold_x`, and returns the three
/// strong fronts. Both maps are nondecreasing, so the fronts of the
/// mapped matrices can only shrink: `front_b` inside `front_f` inside
/// `front_u`, samplewise.
pub fn coupled_front_chain<R: Rng + ?Sized>(
    k: u64,
    n: u64,
    rng: &mut R,
    d: &DistributionSpec,
    threshold_x: f64,
) -> Result<CoupledFronts, Error> {
    let p = 1.0 - d.cdf(threshold_x);
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "threshold {threshold_x} gives degenerate indicator probability {p}"
        )));
    }
    let u = generate_sample(&DistributionSpec::ContinuousUniform01, k, n, rng)?;
    let x = u.map(|v| d.quantile(v).expect("uniform draws lie inside (0,1)"))?;
    let b = x.map(|v| f64::from(v > threshold_x))?;
    Ok(CoupledFronts {
        front_u: strong_front(&u),
        front_f: strong_front(&x),
        front_b: strong_front(&b),
    })
}

/// Streaming evaluation of the prefix-domination maximum for one fresh
/// sample: draws vector 1 to the given width, then scans competitors until
/// each is first beaten. Returns `None` when any competitor survives the
/// whole width.
fn sample_prefix_max<R: Rng + ?Sized>(
    d: &DistributionSpec,
    width: usize,
    n: u64,
    rng: &mut R,
) -> Option<u64> {
    let first: Vec<f64> = (0..width).map(|_| d.sample(rng)).collect();
    let mut g_max = 0u64;
    for _ in 1..n {
        let mut beaten = None;
        for (j, f) in first.iter().enumerate() {
            let x = d.sample(rng);
            if *f > x {
                beaten = Some(j as u64);
                break;
            }
        }
        match beaten {
            Some(g) => g_max = g_max.max(g),
            None => return None,
        }
    }
    Some(g_max)
}

/// Empirical distribution of the prefix-domination maximum over `log n`.
///
/// Each censored replication is resampled at geometrically doubled width
/// (fresh derived stream per attempt) up to [`PREFIX_WIDTH_CAP`]; if any
/// replication stays censored at the cap the whole call errors. The
/// median is reported with a seeded-bootstrap standard error.
pub fn estimate_m_over_log_n(
    d: &DistributionSpec,
    k_max: u64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<RatioEstimate, Error> {
    if n < 2 || reps == 0 || k_max == 0 {
        return Err(Error::Domain(format!(
            "need n >= 2, reps >= 1, k_max >= 1; got n={n}, reps={reps}, k_max={k_max}"
        )));
    }
    let ln_n = (n as f64).ln();
    let outcomes: Vec<Option<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut width = k_max as usize;
            for attempt in 0..WIDEN_ATTEMPTS {
                let mut rng = replication_rng(seed, rep * WIDEN_ATTEMPTS + attempt);
                if let Some(m) = sample_prefix_max(d, width, n, &mut rng) {
                    return Some(m as f64 / ln_n);
                }
                if width >= PREFIX_WIDTH_CAP {
                    break;
                }
                width = (width * 2).min(PREFIX_WIDTH_CAP);
            }
            None
        })
        .collect();
    let censored = outcomes.iter().filter(|o| o.is_none()).count();
    if censored > 0 {
        return Err(Error::CensorCap {
            cap: PREFIX_WIDTH_CAP,
            censored,
        });
    }
    let ratios: Vec<f64> = outcomes.into_iter().flatten().collect();
    let med = median(&ratios);
    let std_error = bootstrap_median_se(&ratios, seed);
    Ok(RatioEstimate {
        median: med,
        std_error,
        reps,
        ratios,
    })
}

/// Median and seeded-bootstrap standard error for a vector of ratios,
/// e.g. the output of [`ferguson_max_ratio`].
pub fn summarize_ratios(ratios: Vec<f64>, seed: u64) -> Result<RatioEstimate, Error> {
    if ratios.is_empty() {
        return Err(Error::Domain("cannot summarize an empty ratio list".into()));
    }
    let med = median(&ratios);
    let std_error = bootstrap_median_se(&ratios, seed);
    Ok(RatioEstimate {
        median: med,
        std_error,
        reps: ratios.len() as u64,
        ratios,
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

fn bootstrap_median_se(xs: &[f64], seed: u64) -> f64 {
    const BOOT: usize = 200;
    let mut rng = replication_rng(seed, u64::MAX);
    let mut medians = Vec::with_capacity(BOOT);
    let mut resample = vec![0.0; xs.len()];
    for _ in 0..BOOT {
        for slot in resample.iter_mut() {
            *slot = xs[rng.gen_range(0..xs.len())];
        }
        medians.push(median(&resample));
    }
    let mean = medians.iter().sum::<f64>() / BOOT as f64;
    let var = medians.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (BOOT - 1) as f64;
    var.sqrt()
}

/// Simulation estimate of the front-size variance, used as an oracle for
/// the exact variance formula. Returns the sample variance of `|front|`
/// and the standard error of a sample variance (via the empirical fourth
/// central moment).
pub fn front_size_variance_mc(
    d: &DistributionSpec,
    k: u64,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<(f64, f64), Error> {
    if reps < 2 {
        return Err(Error::Domain("variance estimation needs reps >= 2".into()));
    }
    generate_sample(d, k, n, &mut replication_rng(seed, 0))?;
    let sizes: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_rng(seed, rep);
            let m = generate_sample(d, k, n, &mut rng).expect("validated dims");
            strong_front(&m).len() as f64
        })
        .collect();
    let r = reps as f64;
    let mean = sizes.iter().sum::<f64>() / r;
    let m2 = sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / r;
    let m4 = sizes.iter().map(|s| (s - mean).powi(4)).sum::<f64>() / r;
    let sample_var = m2 * r / (r - 1.0);
    // Var(S^2) ~ (m4 - m2^2 (r-3)/(r-1)) / r.
    let se = ((m4 - m2 * m2 * (r - 3.0) / (r - 1.0)) / r).max(0.0).sqrt();
    Ok((sample_var, se))
}

/// Convenience: exp of a log-probability for comparisons in estimator
/// tests.
pub fn prob_of(lp: LogProb) -> f64 {
    lp.prob()
}
