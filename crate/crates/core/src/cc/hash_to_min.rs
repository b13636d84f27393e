//! Each cluster goes to its minimum; the minimum goes to every member.

use crate::engine::{ClusterState, Emitter, HashScheme, Incoming, InitMode};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

use super::rooted_clusters;

#[derive(Clone, Copy, Debug, Default)]
pub struct HashToMin;

impl HashScheme for HashToMin {
    fn name(&self) -> &str {
        "hash-to-min"
    }

    fn init_mode(&self) -> InitMode {
        InitMode::ClosedNeighborhood
    }

    fn map<'a>(&self, _round: usize, _v: NodeId, c: &'a NodeSet, _g: &'a Graph, out: &mut Emitter<'a>) {
        let Some(min) = c.min() else { return };
        out.send_set(min, c);
        for u in c.iter().skip(1) {
            out.send_id(u, min);
        }
    }

    fn reduce(&self, _round: usize, _v: NodeId, incoming: &Incoming<'_>, _prev: &NodeSet) -> NodeSet {
        incoming.union()
    }

    /// Clusters whose minimum is their own key.
    fn export(&self, state: &ClusterState) -> Vec<NodeSet> {
        rooted_clusters(state)
    }
}
