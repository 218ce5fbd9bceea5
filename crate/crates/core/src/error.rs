use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} must be integral")]
    NonIntegral(String),

    #[error("invalid Néron-Severi model: {0}")]
    InvalidModel(String),

    #[error("invalid base variety: {0}")]
    InvalidBase(String),

    #[error("invalid Harder-Narasimhan data: {0}")]
    InvalidHn(String),

    #[error("invalid bundle descriptor: {0}")]
    InvalidBundle(String),

    #[error("invalid twist family: {0}")]
    InvalidTwists(String),

    /// The criterion exists but its hypotheses are not met by the input.
    #[error("criterion not applicable: {0}")]
    NotApplicable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
