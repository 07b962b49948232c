use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition (shape, Hermiticity, normalization, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// An operator would exceed the configured dimension budget.
    #[error("size limit exceeded: dimension {dim} > limit {limit}")]
    SizeLimit { dim: usize, limit: usize },

    /// The Jacobi eigensolver hit its sweep cap.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    Convergence { sweeps: usize, residual: f64 },

    /// An overlap estimate that makes the cost bound vacuous.
    #[error("invalid overlap estimate {alpha}: the bound requires alpha < 1")]
    InvalidEstimate { alpha: f64 },

    /// A construction that should hold by design failed its own check.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ContractViolation(msg.into()))
}
