use thiserror::Error;

/// A pair of same-colored edges meeting in a vertex, reported by rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropernessWitness {
    pub first_rank: usize,
    pub second_rank: usize,
    pub vertex: usize,
    pub color: u32,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("color array has length {got}, expected {expected}")]
    ColorLengthMismatch { got: usize, expected: usize },

    #[error("coloring is not proper: edges #{} and #{} share vertex {} with color {}",
            .0.first_rank, .0.second_rank, .0.vertex, .0.color)]
    NotProper(PropernessWitness),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance exceeds the configured capacity: {0}")]
    Capacity(String),

    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("a result the search machinery guarantees could not be produced: {0}")]
    GuaranteeViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
