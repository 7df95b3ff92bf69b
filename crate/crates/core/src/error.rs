use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation outside its mathematical domain, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters that violate an operation's preconditions.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Exhaustive work would exceed the configured budget.
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    /// An exact computation produced an impossible value. Always a bug.
    #[error("arithmetic inconsistency: {0}")]
    Arithmetic(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
