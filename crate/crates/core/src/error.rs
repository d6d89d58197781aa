use thiserror::Error;

/// Errors raised by the algebra and its encoders.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A documented precondition of an operation does not hold.
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// Input data is well formed but is not a valid instance of what was asked for.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Malformed JSON or scalar encoding.
    #[error("decode error: {0}")]
    Decode(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub(crate) fn decode(msg: impl Into<String>) -> Self {
        Error::Decode(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
