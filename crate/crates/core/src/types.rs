//! Shared numeric types used across the workspace.

use crate::error::Error;
use std::fmt;

/// Natural log of 10, used for `log10` conversions.
pub(crate) const LN_10: f64 = std::f64::consts::LN_10;

/// A probability stored as its natural logarithm.
///
/// The log representation is the working currency for every regime where
/// probabilities underflow `f64`, e.g. `(1 - p^i)^(n-1)` at `n ~ 10^130`.
/// Invariant: the stored value is `<= 0.0`; negative infinity encodes an
/// exact zero probability. Values in `(0, 1e-9]` arising from benign
/// round-off of sums that are mathematically `1` are clamped to `0.0`;
/// anything larger is rejected as a bug upstream.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    /// Exact zero probability.
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    /// Probability one.
    pub const ONE: LogProb = LogProb(0.0);

    /// Wraps a natural-log probability value.
    pub fn new(log_value: f64) -> Result<Self, Error> {
        if log_value.is_nan() {
            return Err(Error::Domain("log-probability is NaN".into()));
        }
        if log_value > 1e-9 {
            return Err(Error::Domain(format!(
                "log-probability {log_value} exceeds 0"
            )));
        }
        Ok(LogProb(log_value.min(0.0)))
    }

    /// Converts a linear-space probability in `[0, 1]`.
    pub fn from_prob(p: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0,1]")));
        }
        Ok(LogProb(p.ln()))
    }

    /// The stored natural-log value (`-inf` for zero).
    pub fn ln(&self) -> f64 {
        self.0
    }

    /// Base-10 logarithm of the probability.
    pub fn log10(&self) -> f64 {
        self.0 / LN_10
    }

    /// Linear-space probability; underflows to `0.0` below roughly `1e-308`.
    pub fn prob(&self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sample size that may be given exactly or as `log10(n)`.
///
/// The log form admits sweeps over astronomically large `n`; it is only
/// accepted by operations that touch `n` analytically (through terms like
/// `(n-1)·log1p(x)`), never by anything that enumerates samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HugeN {
    /// An exact integer count, `n >= 1`.
    Exact(u64),
    /// `log10(n)`, validated to `[0, 300]` so `n` stays below `f64` overflow.
    Log10(f64),
}

impl HugeN {
    pub fn exact(n: u64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Domain("sample size n must be >= 1".into()));
        }
        Ok(HugeN::Exact(n))
    }

    pub fn from_log10(l: f64) -> Result<Self, Error> {
        if !l.is_finite() || !(0.0..=300.0).contains(&l) {
            return Err(Error::Domain(format!(
                "log10(n) = {l} outside supported range [0, 300]"
            )));
        }
        Ok(HugeN::Log10(l))
    }

    /// Natural log of `n`.
    pub fn ln(&self) -> f64 {
        match *self {
            HugeN::Exact(n) => (n as f64).ln(),
            HugeN::Log10(l) => l * LN_10,
        }
    }

    /// Base-10 log of `n`.
    pub fn log10(&self) -> f64 {
        match *self {
            HugeN::Exact(n) => (n as f64).log10(),
            HugeN::Log10(l) => l,
        }
    }

    /// Natural log of `n - delta`, or `-inf` when `n <= delta`.
    ///
    /// Used for the `(n-1)` and `(n-2)` exponents of the exact formulas; the
    /// `-inf` return makes a zero exponent fall out of `exp` arithmetic.
    pub fn ln_minus(&self, delta: u64) -> f64 {
        match *self {
            HugeN::Exact(n) => {
                if n <= delta {
                    f64::NEG_INFINITY
                } else {
                    ((n - delta) as f64).ln()
                }
            }
            HugeN::Log10(l) => {
                // Above ~18 digits the subtraction is below f64 resolution.
                if l > 18.0 {
                    l * LN_10
                } else {
                    let n = 10f64.powf(l);
                    let m = n - delta as f64;
                    if m <= 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        m.ln()
                    }
                }
            }
        }
    }
}

/// Numeric-quality flag attached to results that can silently degrade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// Result is trustworthy at the method's stated accuracy.
    Ok,
    /// Tracked cancellation exceeded the reliability threshold.
    Unreliable,
    /// A subtraction lost more than eight significant digits.
    Cancellation,
}

impl Flag {
    pub fn is_ok(&self) -> bool {
        matches!(self, Flag::Ok)
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flag::Ok => "ok",
            Flag::Unreliable => "unreliable",
            Flag::Cancellation => "cancellation",
        };
        f.write_str(s)
    }
}
