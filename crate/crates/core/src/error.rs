use crate::distance::Distance;

/// Errors raised by graph construction, I/O and the solvers' precondition checks.
///
/// Budget exhaustion is not an error; it is reported through
/// [`Status::LowerBound`](crate::search::Status).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has diameter {0}, expected 2")]
    DiameterNotTwo(Distance),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
