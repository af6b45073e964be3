use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum GlError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for the zero vector")]
    ZeroVector,
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("square root of a negative quantity")]
    NegativeSqrt,
    #[error("logarithm of a non-positive quantity")]
    LogOfNonPositive,
    #[error("integer exponent too large")]
    ExponentOverflow,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis check did not hold: {0}")]
    HypothesisRejected(String),
    #[error("verification undecided at precision cap ({0} bits)")]
    Undecided(u32),
    #[error("no certifiable candidate found: {0}")]
    NotFound(String),
    #[error("internal invariant violated (this is a bug): {0}")]
    InternalBug(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl GlError {
    pub fn precondition(msg: impl Into<String>) -> Self {
        GlError::Precondition(msg.into())
    }
}
