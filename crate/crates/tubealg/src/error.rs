use thiserror::Error;

#[derive(Debug, Error)]
pub enum TubeError {
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("singular gram matrix: {0}")]
    SingularGram(String),
    #[error("action is not proportional to the lowest-weight vector: {0}")]
    NonProportional(String),
    #[error("inadmissible character point: {0}")]
    Inadmissible(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, TubeError>;
