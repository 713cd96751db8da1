use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuarkError {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("unknown node identifiers on lines {0:?}")]
    UnknownNodes(Vec<usize>),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("refused: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QuarkError>;
