use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
    #[error("precision must be at least 64 bits, got {0}")]
    Precision(u32),
    #[error("cannot parse {input:?} as a decimal number")]
    Parse { input: String },
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("vector length {got} does not match degree {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("zero denominator at component {index}: vector has duplicate components")]
    DegenerateDenominator { index: usize },
    #[error("iterate is not certified: E_f = {ef} is not below the threshold {threshold}")]
    NotCertified { ef: String, threshold: String },
    #[error("trace holds no admissible triple of nonzero errors")]
    InsufficientTrace,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
