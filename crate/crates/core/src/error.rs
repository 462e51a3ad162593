use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no generators")]
    NoGenerators,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("values are not a valid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("insufficient data: need at least {required} elements, have {available}")]
    InsufficientData { required: usize, available: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("weight is not positive on the circle (min sampled value {min})")]
    NonPositiveWeight { min: f64 },
    #[error("generator not confirmed: {0}")]
    GeneratorNotConfirmed(String),
    #[error("no progression structure detected: {0}")]
    NoProgressionStructure(String),
    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
    #[error("spectrum file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
