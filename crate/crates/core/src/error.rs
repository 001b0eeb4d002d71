use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("invalid ring data: {0}")]
    InvalidRing(String),

    #[error("pairing verification failed for {ring}: {violations} violation(s)")]
    PairingFailure { ring: String, violations: usize },

    #[error("coefficient {0} is not an integer")]
    NotIntegral(String),

    #[error("cycle is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("invalid morphism data: {0}")]
    InvalidMorphism(String),

    #[error("invalid fibration model: {0}")]
    InvalidModel(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("projector system failed verification: {0}")]
    SystemFailure(String),

    #[error("Chow-Kunneth hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("guard exceeded: {0}")]
    Guard(String),

    #[error("parse error in {source_name} at line {line}, column {column}: {message}")]
    Parse { source_name: String, line: usize, column: usize, message: String },

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
