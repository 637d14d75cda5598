use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("discrete logarithm of zero is undefined")]
    LogOfZero,

    #[error("element is not in this field")]
    ForeignElement,

    #[error("group ring order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("non-rational value: {0}")]
    NonRational(String),

    #[error("invalid curve parameters: {0}")]
    InvalidParams(String),

    #[error("no representation as a sum of two squares: {0}")]
    NoRepresentation(u64),

    #[error("invalid hypergeometric spec: {0}")]
    InvalidSpec(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("output error: {0}")]
    Output(String),
}
