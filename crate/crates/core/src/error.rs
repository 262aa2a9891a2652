use std::io;
use thiserror::Error;

/// Errors produced by graph loading, counting, and the reference oracles.
#[derive(Debug, Error)]
pub enum Error {
    /// The input could not be parsed as an edge list.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The input contained no edges at all.
    #[error("input contains no edges")]
    EmptyInput,

    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The search recursion hit its configured depth cap.
    #[error("search recursion exceeded the depth limit of {0}")]
    DepthLimitExceeded(usize),

    /// The brute-force oracle exceeded its work budget.
    #[error("oracle work budget of {0} enumeration steps exceeded")]
    OracleBudgetExceeded(u64),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
