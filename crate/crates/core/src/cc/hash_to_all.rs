//! Every node sends its whole cluster to every member of it.

use crate::engine::{ClusterState, Emitter, HashScheme, Incoming, InitMode};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

use super::sorted_components;

#[derive(Clone, Copy, Debug, Default)]
pub struct HashToAll;

impl HashScheme for HashToAll {
    fn name(&self) -> &str {
        "hash-to-all"
    }

    fn init_mode(&self) -> InitMode {
        InitMode::ClosedNeighborhood
    }

    fn map<'a>(&self, _round: usize, _v: NodeId, c: &'a NodeSet, _g: &'a Graph, out: &mut Emitter<'a>) {
        out.multicast_to_members(c);
    }

    fn reduce(&self, _round: usize, _v: NodeId, incoming: &Incoming<'_>, _prev: &NodeSet) -> NodeSet {
        incoming.union()
    }

    /// Distinct final clusters.
    fn export(&self, state: &ClusterState) -> Vec<NodeSet> {
        let mut all: Vec<NodeSet> = state.clusters().iter().filter(|c| !c.is_empty()).cloned().collect();
        all.sort_by_key(NodeSet::min);
        all.dedup();
        sorted_components(all)
    }
}
