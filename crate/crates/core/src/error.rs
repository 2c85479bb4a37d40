use thiserror::Error;

use crate::instance::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("instance is not a tree")]
    NotATree,

    #[error("instance is marked disconnected and cannot be solved")]
    DisconnectedInstance,

    #[error("expected exactly {expected} colors, found {found}")]
    ColorCount { expected: usize, found: usize },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("edge {0}-{1} is not in the graph")]
    EdgeNotInGraph(VertexId, VertexId),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }
}
