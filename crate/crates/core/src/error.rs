use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("construction infeasible: {0}")]
    ConstructionInfeasible(String),
    #[error("truncation insufficient: Q={q} exceeds q_max_valid={q_max_valid}; need truncation level {required_level}")]
    TruncationInsufficient {
        q: u64,
        q_max_valid: String,
        required_level: usize,
    },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("indeterminate comparison: {0}")]
    Indeterminate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
