use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("expected a {expected} field, got a {found} field")]
    WrongRepresentation { expected: &'static str, found: &'static str },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value after step {step} of {context}")]
    NonFinite { context: &'static str, step: usize },

    #[error("truncation mismatch: {0}")]
    Truncation(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("time {0} is not a trajectory sample")]
    TimeNotSampled(f64),

    #[error("malformed field container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
