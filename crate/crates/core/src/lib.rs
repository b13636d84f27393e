//! Round-synchronised map-reduce simulation of connected-components hashing
//! schemes and distributed single-linkage clustering.
//!
//! Every scheme runs on the same sequential [`engine`]: map each node's
//! cluster to keyed messages, group them by key, reduce per key in ascending
//! key order, and repeat until no cluster changes. Per-round message and
//! node-id volume is recorded so round and communication bounds can be
//! checked directly.

pub mod cc;
pub mod engine;
pub mod error;
pub mod graph;
pub mod nodeset;
pub mod oracle;
pub mod report;
pub mod slc;

/// Node identifier. Graphs use the compact range `0..node_count`.
pub type NodeId = u32;

pub use cc::{Algorithm, LbConfig};
pub use engine::{ClusterState, Engine, HashScheme, InitMode, RoundMetrics, RunResult};
pub use error::{EngineError, GraphError, SlcError};
pub use graph::{Graph, Relabeling};
pub use nodeset::NodeSet;
pub use slc::{Clustering, CoreTree, StopPredicate};
