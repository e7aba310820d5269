use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain an operation is defined on.
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("{n} is not prime{}", .witness.map(|d| format!(" (divisible by {d})")).unwrap_or_default())]
    NotPrime { n: u64, witness: Option<u64> },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// The requested sieve or table would exceed the configured memory budget.
    #[error("capacity exceeded: {what} needs {needed} bytes, budget is {budget} bytes")]
    Capacity {
        what: String,
        needed: u64,
        budget: u64,
    },

    #[error("records out of order: index {index} follows {previous}")]
    Unordered { index: u64, previous: u64 },

    #[error("invalid campaign configuration: {0}")]
    Config(String),

    #[error("corrupt checkpoint at line {line}: {reason}")]
    CorruptCheckpoint { line: usize, reason: String },

    #[error("malformed record: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }
}
