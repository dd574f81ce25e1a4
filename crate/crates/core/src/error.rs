use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the range where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two independent derivations of the same quantity disagree.
    #[error("assertion failure: {0}")]
    AssertionFailure(String),

    /// The normal-form recursion left the region allowed by the index bound.
    #[error("termination guard exceeded: {0}")]
    TerminationGuardExceeded(String),

    #[error("parse error at {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn assertion(msg: impl Into<String>) -> Self {
        Error::AssertionFailure(msg.into())
    }

    /// Short machine-readable name used in CLI failure records and FFI codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::AssertionFailure(_) => "AssertionFailure",
            Error::TerminationGuardExceeded(_) => "TerminationGuardExceeded",
            Error::Parse { .. } => "ParseError",
            Error::Cache(_) => "CacheError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
