//! Two label-propagation rounds followed by one Hash-Greater-to-Min round,
//! repeated.
//!
//! In the propagation rounds a node keeps its cluster and adds the smallest
//! label it hears. It sends its minimum to itself, to its neighbours, and to
//! the smaller ids it holds (the minimum that owns it), so a cluster's owner
//! learns of a smaller label within two rounds. In the greater-to-min round,
//! `GT(v) = {u ∈ C_v : u ≥ v}` goes to `min C_v` and that minimum goes to
//! every member of `GT(v)`; reducers take the union.

use crate::engine::{ClusterState, Emitter, HashScheme, Incoming, InitMode};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

use super::rooted_clusters;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    HashMin,
    GreaterToMin,
}

/// Phase executed in round `round` (numbered from 1).
pub fn phase(round: usize) -> Phase {
    if round.is_multiple_of(3) {
        Phase::GreaterToMin
    } else {
        Phase::HashMin
    }
}

/// `GT(v)`: members of `c` not less than `v`.
pub fn greater_set(v: NodeId, c: &NodeSet) -> NodeSet {
    c.at_least(v)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Alternating;

impl HashScheme for Alternating {
    fn name(&self) -> &str {
        "hgtm-alt"
    }

    fn init_mode(&self) -> InitMode {
        InitMode::Singleton
    }

    fn period(&self) -> usize {
        3
    }

    fn map<'a>(&self, round: usize, v: NodeId, c: &'a NodeSet, g: &'a Graph, out: &mut Emitter<'a>) {
        let Some(min) = c.min() else { return };
        match phase(round) {
            Phase::HashMin => {
                out.send_id(v, min);
                for &u in g.neighbors(v) {
                    out.send_id(u, min);
                }
                if v > 0 {
                    for u in c.at_most(v - 1).iter().filter(|&u| u != min) {
                        out.send_id(u, min);
                    }
                }
            }
            Phase::GreaterToMin => {
                let gt = greater_set(v, c);
                if gt.is_empty() {
                    return;
                }
                for u in gt.iter().filter(|&u| u != min) {
                    out.send_id(u, min);
                }
                out.send_set(min, gt);
            }
        }
    }

    fn reduce(&self, round: usize, _v: NodeId, incoming: &Incoming<'_>, prev: &NodeSet) -> NodeSet {
        match phase(round) {
            Phase::HashMin => {
                let mut next = prev.clone();
                if let Some(m) = incoming.min() {
                    next.insert(m);
                }
                next
            }
            Phase::GreaterToMin => incoming.union(),
        }
    }

    fn export(&self, state: &ClusterState) -> Vec<NodeSet> {
        rooted_clusters(state)
    }
}
