use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("coefficient budget exceeded after n = {last_n}")]
    BudgetExceeded { last_n: usize },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("genericity failure: {0}")]
    Genericity(String),
    #[error("sampling exhausted after {tries} tries; most frequent failure: {reason}")]
    SamplingExhausted { tries: usize, reason: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
