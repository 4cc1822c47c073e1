use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("wire {wire} out of range for a {qubits}-qubit circuit")]
    Wire { wire: usize, qubits: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("vector is not in the span of the basis")]
    NotInSpan,
    #[error("circuit contains a T gate where a Clifford circuit is required")]
    NonClifford,
    #[error("{0} qubits exceeds the dense oracle bound of {1}")]
    OracleBound(usize, usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn dim<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
