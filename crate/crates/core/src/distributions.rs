//! Coordinate laws: CDF, the survival function `S(x) = P(X >= x)`, its
//! pseudo-inverse, the quantile function, and inverse-transform sampling.
//!
//! `S` uses the weak inequality throughout. It is left-continuous and
//! nonincreasing, and for laws with atoms it is *not* `1 - F`; the
//! Bernoulli transition constant depends on that distinction.
//!
//! Sampling pushes shared uniforms through [`DistributionSpec::quantile`],
//! so samples of different laws driven by the same RNG stream are coupled
//! monotonically by construction.

use crate::error::Error;
use rand::distributions::Open01;
use rand::Rng;
use std::fmt;
use std::str::FromStr;

/// Tolerance for the "probabilities sum to one" validation.
const PROB_SUM_TOL: f64 = 1e-12;

/// A coordinate law. Immutable after construction; all operations are pure.
///
/// Construct through the checked constructors (or [`FromStr`]); the
/// operations assume the invariants hold.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    /// Uniform on (0, 1). Stands in for every continuous law in the
    /// front-membership computations, which are invariant to the choice of
    /// continuous distribution.
    ContinuousUniform01,
    /// Exponential with the given rate.
    Exponential { rate: f64 },
    /// Bernoulli with success probability strictly inside (0, 1).
    Bernoulli { p: f64 },
    /// Finitely supported law with strictly increasing atoms.
    FiniteDiscrete { values: Vec<f64>, probs: Vec<f64> },
}

impl DistributionSpec {
    pub fn uniform01() -> Self {
        DistributionSpec::ContinuousUniform01
    }

    pub fn exponential(rate: f64) -> Result<Self, Error> {
        let d = DistributionSpec::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn bernoulli(p: f64) -> Result<Self, Error> {
        let d = DistributionSpec::Bernoulli { p };
        d.validate()?;
        Ok(d)
    }

    pub fn finite_discrete(values: Vec<f64>, probs: Vec<f64>) -> Result<Self, Error> {
        let d = DistributionSpec::FiniteDiscrete { values, probs };
        d.validate()?;
        Ok(d)
    }

    /// Checks the construction invariants.
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            DistributionSpec::ContinuousUniform01 => Ok(()),
            DistributionSpec::Exponential { rate } => {
                if rate.is_finite() && *rate > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidDistribution(format!(
                        "exponential rate must be positive, got {rate}"
                    )))
                }
            }
            DistributionSpec::Bernoulli { p } => {
                if p.is_finite() && *p > 0.0 && *p < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidDistribution(format!(
                        "Bernoulli p must lie strictly inside (0,1), got {p}"
                    )))
                }
            }
            DistributionSpec::FiniteDiscrete { values, probs } => {
                if values.is_empty() || values.len() != probs.len() {
                    return Err(Error::InvalidDistribution(
                        "discrete law needs matching, non-empty values and probs".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidDistribution(
                        "discrete values must be finite".into(),
                    ));
                }
                if values.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidDistribution(
                        "discrete values must be strictly increasing".into(),
                    ));
                }
                if probs.iter().any(|q| !(*q > 0.0) || !q.is_finite()) {
                    return Err(Error::InvalidDistribution(
                        "discrete probabilities must all be positive".into(),
                    ));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > PROB_SUM_TOL {
                    return Err(Error::InvalidDistribution(format!(
                        "discrete probabilities sum to {total}, not 1"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Whether the law is one of the continuous families.
    pub fn is_continuous(&self) -> bool {
        matches!(
            self,
            DistributionSpec::ContinuousUniform01 | DistributionSpec::Exponential { .. }
        )
    }

    /// Right-continuous CDF, `F(x) = P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::ContinuousUniform01 => x.clamp(0.0, 1.0),
            DistributionSpec::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            DistributionSpec::Bernoulli { p } => {
                if x < 0.0 {
                    0.0
                } else if x < 1.0 {
                    1.0 - p
                } else {
                    1.0
                }
            }
            DistributionSpec::FiniteDiscrete { values, probs } => {
                let mut acc = 0.0;
                for (v, q) in values.iter().zip(probs) {
                    if *v <= x {
                        acc += q;
                    } else {
                        break;
                    }
                }
                acc.min(1.0)
            }
        }
    }

    /// Survival-at-least function `S(x) = P(X >= x)`: left-continuous and
    /// nonincreasing. For laws with atoms this differs from `1 - F(x)` at
    /// the atoms themselves.
    pub fn survival_geq(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::ContinuousUniform01 => (1.0 - x).clamp(0.0, 1.0),
            DistributionSpec::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            DistributionSpec::Bernoulli { p } => {
                if x <= 0.0 {
                    1.0
                } else if x <= 1.0 {
                    *p
                } else {
                    0.0
                }
            }
            DistributionSpec::FiniteDiscrete { values, probs } => {
                // Suffix sum over atoms >= x, accumulated from the top so the
                // small tail probabilities are added first.
                let mut acc = 0.0;
                for (v, q) in values.iter().zip(probs).rev() {
                    if *v >= x {
                        acc += q;
                    } else {
                        break;
                    }
                }
                acc.min(1.0)
            }
        }
    }

    /// Pseudo-inverse of the survival function,
    /// `inf { x : S(x) <= y }` for `y` in (0, 1).
    ///
    /// The infimum convention means that for laws with atoms the infimum is
    /// generally not attained: `S` evaluated *at* the returned point may
    /// exceed `y`, while `S(x) <= y` for every `x` strictly to the right.
    pub fn survival_pseudo_inverse(&self, y: f64) -> Result<f64, Error> {
        if !(y > 0.0 && y < 1.0) {
            return Err(Error::Domain(format!(
                "survival pseudo-inverse needs y in (0,1), got {y}"
            )));
        }
        Ok(match self {
            DistributionSpec::ContinuousUniform01 => 1.0 - y,
            DistributionSpec::Exponential { rate } => -y.ln() / rate,
            DistributionSpec::Bernoulli { p } => {
                if *p <= y {
                    0.0
                } else {
                    1.0
                }
            }
            DistributionSpec::FiniteDiscrete { values, probs } => {
                // S takes the value tail[i] = q_i + ... + q_{m-1} on the
                // interval (v_{i-1}, v_i]. The region where S <= y opens
                // just right of the atom whose remaining tail first drops
                // to y or below.
                let m = values.len();
                let mut tail = vec![0.0; m + 1];
                for i in (0..m).rev() {
                    tail[i] = tail[i + 1] + probs[i];
                }
                for i in 1..=m {
                    if tail[i] <= y {
                        return Ok(values[i - 1]);
                    }
                }
                // tail[m] = 0 <= y makes the loop always return.
                unreachable!("empty tail is <= y")
            }
        })
    }

    /// Generalized inverse CDF, `inf { x : F(x) >= u }` for `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64, Error> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!(
                "quantile needs u in (0,1), got {u}"
            )));
        }
        Ok(match self {
            DistributionSpec::ContinuousUniform01 => u,
            DistributionSpec::Exponential { rate } => -(-u).ln_1p() / rate,
            DistributionSpec::Bernoulli { p } => {
                if u <= 1.0 - p {
                    0.0
                } else {
                    1.0
                }
            }
            DistributionSpec::FiniteDiscrete { values, probs } => {
                let mut acc = 0.0;
                for (v, q) in values.iter().zip(probs) {
                    acc += q;
                    if acc >= u {
                        return Ok(*v);
                    }
                }
                // Round-off in the cumulative sum can leave acc just below u.
                values[values.len() - 1]
            }
        })
    }

    /// One inverse-transform draw. Deterministic and replayable under a
    /// seeded RNG; the shared-uniform construction makes quantile coupling
    /// across laws exact.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile(u).expect("Open01 yields u strictly inside (0,1)")
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionSpec::ContinuousUniform01 => write!(f, "uniform"),
            DistributionSpec::Exponential { rate } => write!(f, "exp:{rate}"),
            DistributionSpec::Bernoulli { p } => write!(f, "bern:{p}"),
            DistributionSpec::FiniteDiscrete { values, probs } => {
                write!(f, "disc:")?;
                for (i, (v, q)) in values.iter().zip(probs).enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}:{q}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses the CLI spec format: `uniform`, `exp:<rate>`, `bern:<p>`,
    /// `disc:<v1:p1,v2:p2,...>`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |msg: &str| Error::InvalidDistribution(format!("{msg}: {s:?}"));
        if s == "uniform" {
            return Ok(DistributionSpec::ContinuousUniform01);
        }
        if let Some(rest) = s.strip_prefix("exp:") {
            let rate: f64 = rest.parse().map_err(|_| bad("bad exponential rate"))?;
            return DistributionSpec::exponential(rate);
        }
        if let Some(rest) = s.strip_prefix("bern:") {
            let p: f64 = rest.parse().map_err(|_| bad("bad Bernoulli p"))?;
            return DistributionSpec::bernoulli(p);
        }
        if let Some(rest) = s.strip_prefix("disc:") {
            let mut values = Vec::new();
            let mut probs = Vec::new();
            for pair in rest.split(',') {
                let (v, q) = pair
                    .rsplit_once(':')
                    .ok_or_else(|| bad("discrete atoms must be v:p pairs"))?;
                values.push(v.parse().map_err(|_| bad("bad discrete value"))?);
                probs.push(q.parse().map_err(|_| bad("bad discrete probability"))?);
            }
            return DistributionSpec::finite_discrete(values, probs);
        }
        Err(bad("unrecognized distribution spec"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn disc_thirds() -> DistributionSpec {
        DistributionSpec::finite_discrete(
            vec![0.0, 1.0, 2.0],
            vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        )
        .unwrap()
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(DistributionSpec::bernoulli(0.0).is_err());
        assert!(DistributionSpec::bernoulli(1.0).is_err());
        assert!(DistributionSpec::exponential(0.0).is_err());
        assert!(DistributionSpec::exponential(-2.0).is_err());
        assert!(DistributionSpec::finite_discrete(vec![1.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(DistributionSpec::finite_discrete(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(DistributionSpec::finite_discrete(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(DistributionSpec::finite_discrete(vec![], vec![]).is_err());
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(DistributionSpec::uniform01().cdf(0.3), 0.3);
        let b = DistributionSpec::bernoulli(0.4).unwrap();
        assert!((b.cdf(0.0) - 0.6).abs() < 1e-15);
        assert!((disc_thirds().cdf(1.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn survival_examples() {
        let b = DistributionSpec::bernoulli(0.4).unwrap();
        assert_eq!(b.survival_geq(1.0), 0.4);
        assert_eq!(b.survival_geq(0.0), 1.0);
        assert_eq!(b.survival_geq(1.5), 0.0);
        assert!((DistributionSpec::uniform01().survival_geq(0.3) - 0.7).abs() < 1e-15);
        let d = disc_thirds();
        assert!((d.survival_geq(1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.survival_geq(2.0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.survival_geq(-1.0), 1.0);
    }

    /// Grid-scan oracle for the infimum definition: the smallest grid point
    /// x with S(x) <= y, refined to the stated resolution.
    fn pseudo_inverse_by_scan(d: &DistributionSpec, y: f64, lo: f64, hi: f64) -> f64 {
        let steps = 4_000_000;
        let dx = (hi - lo) / steps as f64;
        for i in 0..=steps {
            let x = lo + i as f64 * dx;
            if d.survival_geq(x) <= y {
                return x;
            }
        }
        f64::INFINITY
    }

    #[test]
    fn pseudo_inverse_examples() {
        let u = DistributionSpec::uniform01();
        assert!((u.survival_pseudo_inverse(0.25).unwrap() - 0.75).abs() < 1e-15);
        let b = DistributionSpec::bernoulli(0.4).unwrap();
        assert_eq!(b.survival_pseudo_inverse(0.5).unwrap(), 0.0);
        assert_eq!(b.survival_pseudo_inverse(0.3).unwrap(), 1.0);
        assert!(b.survival_pseudo_inverse(0.0).is_err());
        assert!(b.survival_pseudo_inverse(1.0).is_err());

        // Scan oracle: the infimum is approached from the right, so the scan
        // lands within one grid step above it.
        for &(y, expect) in &[(0.5, 0.0), (0.3, 1.0)] {
            let scanned = pseudo_inverse_by_scan(&b, y, -1.0, 2.0);
            assert!(
                scanned >= expect && scanned - expect < 1e-5,
                "scan at y={y} gave {scanned}, expected inf {expect}"
            );
        }
        let d = disc_thirds();
        for &y in &[0.05, 0.2, 0.34, 0.5, 0.66, 0.9] {
            let inf = d.survival_pseudo_inverse(y).unwrap();
            let scanned = pseudo_inverse_by_scan(&d, y, -1.0, 3.0);
            assert!(
                scanned >= inf - 1e-12 && scanned - inf < 1e-5,
                "y={y}: inf {inf} vs scan {scanned}"
            );
        }
    }

    #[test]
    fn pseudo_inverse_right_side_bound() {
        // For every y, S(x) <= y strictly to the right of the infimum. At
        // atoms the infimum itself is not attained, so the bound is checked
        // just right of the returned point.
        let laws = [
            DistributionSpec::uniform01(),
            DistributionSpec::exponential(1.7).unwrap(),
            DistributionSpec::bernoulli(0.4).unwrap(),
            disc_thirds(),
        ];
        for d in &laws {
            for i in 1..50 {
                let y = i as f64 / 50.0;
                let x = d.survival_pseudo_inverse(y).unwrap();
                let eps = 1e-9 * x.abs().max(1.0);
                assert!(
                    d.survival_geq(x + eps) <= y + 1e-12,
                    "{d}: S({x} + eps) > {y}"
                );
                if d.is_continuous() {
                    assert!(d.survival_geq(x) <= y + 1e-12);
                }
            }
        }
    }

    #[test]
    fn quantile_examples() {
        let u = DistributionSpec::uniform01();
        assert_eq!(u.quantile(0.37).unwrap(), 0.37);
        let b = DistributionSpec::bernoulli(0.4).unwrap();
        assert_eq!(b.quantile(0.7).unwrap(), 1.0);
        assert_eq!(b.quantile(0.6).unwrap(), 0.0);
        assert_eq!(disc_thirds().quantile(0.5).unwrap(), 1.0);
        assert!(b.quantile(0.0).is_err());
        assert!(b.quantile(1.0).is_err());
    }

    #[test]
    fn quantile_is_nondecreasing() {
        let laws = [
            DistributionSpec::uniform01(),
            DistributionSpec::exponential(0.5).unwrap(),
            DistributionSpec::bernoulli(0.25).unwrap(),
            disc_thirds(),
        ];
        for d in &laws {
            let mut prev = f64::NEG_INFINITY;
            for i in 1..1000 {
                let q = d.quantile(i as f64 / 1000.0).unwrap();
                assert!(q >= prev, "{d}: quantile decreased at u={}", i as f64 / 1000.0);
                prev = q;
            }
        }
    }

    #[test]
    fn continuous_survival_complements_cdf() {
        for d in [
            DistributionSpec::uniform01(),
            DistributionSpec::exponential(2.3).unwrap(),
        ] {
            for i in -20..60 {
                let x = i as f64 * 0.05;
                assert!((d.survival_geq(x) + d.cdf(x) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_replayable() {
        let d = DistributionSpec::exponential(1.0).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..100).map(|_| d.sample(&mut a)).collect();
        let ys: Vec<f64> = (0..100).map(|_| d.sample(&mut b)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn bernoulli_sample_mean() {
        let d = DistributionSpec::bernoulli(0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.3).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn exponential_empirical_cdf_close() {
        let d = DistributionSpec::exponential(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut sup = 0f64;
        for (i, x) in xs.iter().enumerate() {
            let emp_hi = (i + 1) as f64 / n as f64;
            let emp_lo = i as f64 / n as f64;
            let f = d.cdf(*x);
            sup = sup.max((emp_hi - f).abs()).max((f - emp_lo).abs());
        }
        assert!(sup < 0.01, "sup distance {sup}");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["uniform", "exp:1.5", "bern:0.4", "disc:0:0.25,1:0.25,2:0.5"] {
            let d: DistributionSpec = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("bern:1.0".parse::<DistributionSpec>().is_err());
        assert!("exp:-1".parse::<DistributionSpec>().is_err());
        assert!("disc:1:0.5,0:0.5".parse::<DistributionSpec>().is_err());
        assert!("lognormal".parse::<DistributionSpec>().is_err());
    }
}
