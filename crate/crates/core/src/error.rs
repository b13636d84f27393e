use thiserror::Error;

use crate::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop on node {0}")]
    SelfLoop(u64),
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    NodeOutOfRange(u64, u64, usize),
    #[error("weight {0} outside (0, 1]")]
    WeightOutOfRange(f64),
    #[error("weight {0} appears on more than one edge")]
    DuplicateWeight(f64),
    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdge(u64, u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

/// Faults raised by the round engine. These signal a broken scheme or a
/// violated input contract, not a property of the graph.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("max_rounds must be at least 1")]
    ZeroRounds,
    #[error("scheme emitted key {key} outside the id space 0..{node_count}")]
    KeyOutOfRange { key: NodeId, node_count: usize },
    #[error("scheme emitted id {id} outside the id space 0..{node_count}")]
    PayloadOutOfRange { id: NodeId, node_count: usize },
    #[error("scheme emitted an empty payload to key {0}")]
    EmptyPayload(NodeId),
    #[error("input sequence {index} is not strictly increasing")]
    Unsorted { index: usize },
    #[error("initial state has {got} clusters for {expected} nodes")]
    StateSize { got: usize, expected: usize },
    #[error("run did not converge; export is undefined")]
    NotConverged,
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("threshold tau must be at least 1")]
    InvalidTau,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlcError {
    #[error("graph is not weighted")]
    Unweighted,
    #[error("cluster is empty")]
    EmptyCluster,
    #[error("clusters overlap")]
    Overlap,
    #[error("cluster of size 1 cannot be split")]
    Singleton,
    #[error("induced subgraph of the cluster is disconnected")]
    Disconnected,
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("clustering does not cover every node exactly once")]
    NotAPartition,
    #[error("scheme `{0}` is not supported for clustering")]
    UnsupportedScheme(String),
    #[error("invalid stop predicate `{0}`")]
    BadPredicate(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
