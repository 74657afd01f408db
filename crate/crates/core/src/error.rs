use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied parameters that violate an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Exhaustive enumeration would exceed the configured size guard.
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("missing table data: {0}")]
    MissingTable(String),

    /// Arithmetic that must be exact produced an impossible value.
    #[error("internal inconsistency: {0}")]
    Tripwire(String),

    #[error(
        "bound inapplicable at this SNR: every term violates the validity condition ({skipped} skipped)"
    )]
    BoundInapplicable { skipped: usize },

    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn tripwire(msg: impl Into<String>) -> Self {
        Error::Tripwire(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Tripwire(_) => 3,
            _ => 1,
        }
    }
}
