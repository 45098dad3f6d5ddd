use thiserror::Error;

/// Errors surfaced by the computational modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A distribution was constructed or parsed with invalid parameters.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative scheme did not reach the requested tolerance. Carries
    /// the best estimate reached so callers can still inspect it.
    #[error("failed to converge to tolerance {tol}: best estimate {best}")]
    Convergence { best: f64, tol: f64 },

    /// A computation would exceed the configured size cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Prefix-domination sampling stayed censored after widening to the cap.
    #[error("prefix width capped at {cap} with {censored} replications still censored")]
    CensorCap { cap: usize, censored: usize },
}
