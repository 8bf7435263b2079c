use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("semisimple quotient is not split: {0}")]
    NotSplit(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("morphism is not invertible")]
    NotInvertible,
    #[error("negative powers of t require a Laurent signature")]
    NegativePower,
    #[error("chain map lift failed in degree {degree}: {detail}")]
    LiftFailed { degree: usize, detail: String },
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
