use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {index} outside {min}..={max}")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("eigenvalue isolation failed: {0}")]
    Isolation(String),

    #[error("degenerate spectrum: {0}")]
    Degenerate(String),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("incomplete eigensystem: expected {expected} pairs, got {got}")]
    IncompleteEigensystem { expected: usize, got: usize },

    #[error("invalid limit case: {0}")]
    InvalidLimitCase(String),

    #[error("glued tree construction failed: {0}")]
    Gluing(String),
}
