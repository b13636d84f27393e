//! Cores and minimal core decompositions of single clusters.

use super::tree::CoreTree;
use crate::error::SlcError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;

/// Whether `c` is a core: a singleton, or a cluster whose two split halves
/// are cores and each other's nearest cluster (the lightest edge leaving
/// either half lands in the other).
pub fn is_core(g: &Graph, c: &NodeSet) -> Result<bool, SlcError> {
    Ok(CoreTree::build(g, c)?.is_core())
}

/// Partition of `c` into maximal cores, found by splitting non-cores
/// recursively.
pub fn mcd(g: &Graph, c: &NodeSet) -> Result<Vec<NodeSet>, SlcError> {
    Ok(CoreTree::build(g, c)?.mcd())
}
