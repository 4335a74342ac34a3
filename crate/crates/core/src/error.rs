use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("truncation level {given} too small; at least {required} is needed")]
    InsufficientLevel { given: usize, required: usize },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid cochain: {0}")]
    InvalidCochain(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("loop leaves the connection domain at u = {u}")]
    OutsideDomain { u: f64 },
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
    #[error("underlying class changes along the path: {0}")]
    TopologyChange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
