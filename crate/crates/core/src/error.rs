use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("non-generic parameter: {0}")]
    NonGeneric(String),
    #[error("parse error at {pos} in {input:?}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("placement out of range: {0}")]
    Placement(String),
    #[error("operator is singular: {0}")]
    Singular(String),
    #[error("braiding is not skew-invertible: {0}")]
    NotSkewInvertible(String),
    #[error("symmetry is not even of bi-rank (m|0); rank profile {profile:?}")]
    NotEven { profile: Vec<usize> },
    #[error("pair is not compatible: {0}")]
    Incompatible(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
