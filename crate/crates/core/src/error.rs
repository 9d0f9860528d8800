use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("missing `*Vertices` header")]
    MissingHeader,

    #[error("vertex id {id} outside [1, {n}] on line {line}")]
    VertexOutOfRange { line: usize, id: u64, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph with {n} vertices exceeds the limit of {limit}")]
    GraphTooLarge { n: usize, limit: usize },

    #[error("path enumeration exceeded the cap of {cap} paths")]
    PathLimitExceeded { cap: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid walk script: {0}")]
    Script(String),

    #[error("score vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),
}
