use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Shapes of two operands do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A run produced non-finite state entries.
    #[error("diverged: non-finite values in {0}")]
    NonFinite(String),

    /// A matrix computation could not be completed (singularity,
    /// failed convergence, loss of positive semidefiniteness).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An abstraction-ordering precondition does not hold.
    #[error("ordering violated: {0}")]
    OrderingViolated(String),

    /// Malformed external data (dataset files, serialized containers).
    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
