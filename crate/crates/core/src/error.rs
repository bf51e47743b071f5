use thiserror::Error;

/// Errors produced by `lytensor-core`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid index {index} for a tensor with {n} indices")]
    InvalidIndex { index: usize, n: usize },

    #[error("{what} exceeds the size cap ({value} > {cap})")]
    TooLarge {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("root finder did not converge after {iterations} iterations (max step {max_step:e})")]
    NonConvergence { iterations: usize, max_step: f64 },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("generating polynomial vanishes at the origin: {0}")]
    ZeroAtOrigin(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("marginal estimate {value:e} is negative at level {level}, prefix {prefix}")]
    NegativeMarginal { level: usize, prefix: String, value: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
