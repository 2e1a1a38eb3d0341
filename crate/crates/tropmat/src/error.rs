use thiserror::Error;

/// Errors produced by the combinatorial and geometric operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: ({n1},{d1}) vs ({n2},{d2})")]
    DimensionMismatch { n1: usize, d1: usize, n2: usize, d2: usize },

    #[error("invalid type: {0}")]
    InvalidType(String),

    #[error("invalid ordered partition: {0}")]
    InvalidPartition(String),

    #[error("position {0} out of range 1..={1}")]
    PositionOutOfRange(usize, usize),

    #[error("graph must be connected and spanning: {0}")]
    NotConnected(String),

    #[error("type is not a member of the collection")]
    NotAMember,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("collection is not a GTOM: {0}")]
    NotAGtom(String),

    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("no facet-sharing witness found: {0}")]
    NoWitness(String),

    #[error("rendering is only defined for d in {{2,3}}, got d={0}")]
    RenderDimension(usize),

    #[error("invalid input at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
