//! Label propagation: every node holds one label and adopts the smallest
//! label seen in its closed neighbourhood.

use crate::engine::{ClusterState, Emitter, HashScheme, Incoming, InitMode};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

use super::group_by_label;

#[derive(Clone, Copy, Debug, Default)]
pub struct HashMin;

impl HashScheme for HashMin {
    fn name(&self) -> &str {
        "hash-min"
    }

    fn init_mode(&self) -> InitMode {
        InitMode::Singleton
    }

    fn map<'a>(&self, _round: usize, v: NodeId, c: &'a NodeSet, g: &'a Graph, out: &mut Emitter<'a>) {
        let Some(label) = c.min() else { return };
        out.send_id(v, label);
        for &u in g.neighbors(v) {
            out.send_id(u, label);
        }
    }

    fn reduce(&self, _round: usize, _v: NodeId, incoming: &Incoming<'_>, prev: &NodeSet) -> NodeSet {
        match incoming.min() {
            Some(m) => NodeSet::singleton(m),
            None => prev.clone(),
        }
    }

    fn export(&self, state: &ClusterState) -> Vec<NodeSet> {
        group_by_label(state)
    }
}
