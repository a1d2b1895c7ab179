use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("vertex {0} is not deactivated in the initial partition")]
    NotInitiallyOff(VertexId),

    #[error("vertex {0} is not activated in the initial partition")]
    NotInitiallyOn(VertexId),

    #[error("vertex {0} appears more than once in the update batch")]
    DuplicateInBatch(VertexId),

    #[error("incremental structure cannot deactivate vertices (got {0} deactivations)")]
    DeactivationNotSupported(usize),

    #[error("query endpoint {0} is inactive after the update")]
    QueryOnInactive(VertexId),

    #[error("query endpoint {0} was deactivated by the update")]
    QueryOnDeleted(VertexId),

    #[error("endpoint {0} is active in the component labeling")]
    ActiveEndpoint(VertexId),

    #[error("component id {id} out of range ({k} components)")]
    UnknownComponent { id: usize, k: usize },

    #[error("oracle already received a delete batch; reset it first")]
    OracleAlreadyUpdated,

    #[error("unknown oracle factory '{0}' (expected one of: rebuild, bruteforce)")]
    UnknownOracle(String),

    #[error("an update session is active; roll it back first")]
    SessionActive,

    #[error("session {0} is not the live session")]
    StaleSession(u64),

    #[error("update of size {size} exceeds capacity {capacity}")]
    CapacityExceeded { size: usize, capacity: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
