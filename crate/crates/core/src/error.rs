use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("no feasible solution: {0}")]
    Infeasible(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
