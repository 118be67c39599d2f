use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("variable list mismatch: {0}")]
    VariableMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("constant term is not an invertible rational: {0}")]
    NonInvertibleConstant(String),
    #[error("not a simple pole: {0}")]
    NotASimplePole(String),
    #[error("inconclusive: certified order {certified} is not positive; raise the truncation")]
    Inconclusive { certified: i64 },
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("inconsistent extraction: {0}")]
    InconsistentExtraction(String),
    #[error("verification failed [{item}]: {detail}")]
    VerificationFailed { item: String, detail: String },
    #[error("unknown verification item: {0}")]
    UnknownItem(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
