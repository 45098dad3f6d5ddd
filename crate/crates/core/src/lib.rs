//! Probabilities of Pareto-front membership for iid random vectors.
//!
//! Given `n` iid vectors of dimension `k` with iid coordinates drawn from a
//! law `F`, this crate computes the probability that a fixed vector is a
//! strong (or weak) maximum of the sample, exactly where closed formulas
//! exist and by seeded simulation otherwise. The location of the limiting
//! phase transition, `k ≈ log(n) / gamma`, is controlled by the functional
//! `gamma = -E log S(X)` computed in [`gamma`].
//!
//! Modules:
//! - [`distributions`]: coordinate laws, survival/quantile functions, sampling
//! - [`gamma`]: the transition constant by three independent routes
//! - [`exact_continuous`]: exact and asymptotic front-membership probability
//!   for continuous coordinates
//! - [`exact_bernoulli`]: exact log-space formulas for Bernoulli coordinates,
//!   stable for astronomically large `n`
//! - [`monte_carlo`]: sampling, front computation and estimator machinery

pub mod distributions;
pub mod error;
pub mod exact_bernoulli;
pub mod exact_continuous;
pub mod gamma;
pub mod monte_carlo;
pub mod special;
pub mod types;

pub use distributions::DistributionSpec;
pub use error::Error;
pub use types::{Flag, HugeN, LogProb};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
