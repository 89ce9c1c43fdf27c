use thiserror::Error;

/// Errors surfaced by the library. `Usage` maps to CLI exit code 2, everything
/// else to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_) | Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
