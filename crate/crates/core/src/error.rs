use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on vertex {label}")]
    SelfLoop { line: usize, label: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {0} is already placed")]
    AlreadyPlaced(Vertex),

    #[error("vertex {0} is not placed")]
    NotPlaced(Vertex),

    #[error("no free vertex left to choose from")]
    NoFreeVertex,

    #[error("ordering is not a permutation of the vertex set: {0}")]
    NotPermutation(String),

    #[error("vertex set must not be empty")]
    EmptySet,

    #[error("graph has {n} vertices, the exact solver accepts at most {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("heuristic {heuristic} cannot be combined with turbocharger {turbo}")]
    Incompatible { heuristic: String, turbo: String },
}
