use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("odd order {0}: a perfect matching needs an even number of vertices")]
    Parity(usize),

    #[error("resource limit exceeded: {what} is {actual}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("matrix is not symmetric with zero diagonal: {0}")]
    NotSymmetric(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An identity that must hold exactly did not. Carries the operands.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
