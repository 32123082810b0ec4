use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("truncation level {level} is below the required degree {degree}")]
    Truncation { level: usize, degree: usize },
    #[error("unsupported generator: {0}")]
    Generator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
