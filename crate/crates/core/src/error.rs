use thiserror::Error;

use crate::field::MoserPoint;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex {0}")]
    DuplicateVertex(MoserPoint),
    #[error("graph has {0} vertices; at most {1} are supported")]
    TooManyVertices(usize, usize),
    #[error("empty point set")]
    EmptySet,
    #[error("operation needs at least {needed} vertices, graph has {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("size cap exceeded: {what} is {got}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("colour {colour} at vertex {vertex} is out of range")]
    ColourOutOfRange { vertex: usize, colour: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("LP backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("inconsistent equality system: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
