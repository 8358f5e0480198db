//! Error taxonomy shared by the library and the command-line tool.
//!
//! Every failure carries a single-line, human-readable message. The process
//! exit code is derived from the error kind: bad input or validation problems
//! map to 2, numerical failures (non-convergence, singular results) to 3, and
//! filesystem errors to 4.

/// Unified error type for the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument was rejected before any computation ran.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A geometry or substrate field violates its documented bounds.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A synthesis target lies outside the supported range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// The requested design cannot be realized with the given stack-up.
    #[error("infeasible design: {0}")]
    Infeasible(String),

    /// The requested metric does not exist for the given data
    /// (for example a beamwidth of a cut that never drops 3 dB).
    #[error("metric undefined: {0}")]
    MetricUndefined(String),

    /// An iterative routine exhausted its iteration budget.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// A numerical result left its valid domain (division blow-up, singular
    /// network, non-finite intermediate).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An input file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The filesystem refused a read or write.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence(_) | Error::Numerical(_) => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
