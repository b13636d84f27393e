//! Distributed single-linkage clustering with local monotone stopping.
//!
//! Clusters grow through connected-components rounds. After every round
//! each cluster is decomposed into its maximal cores, the stopping test
//! runs on them, and once it fires the clusters merged too eagerly in the
//! last round are split back along their spanning-tree edges.

mod cores;
mod run;
mod stopping;
mod tree;

use std::fmt;
use std::str::FromStr;

pub use cores::{is_core, mcd};
pub use run::{run_slc, SlcResult, SlcScheme};
pub use stopping::{split_repair, stop_round};
pub use tree::{cluster_distance, min_outgoing, split, CoreTree, WeightedEdge};

use crate::error::SlcError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

/// Per-cluster stopping rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopPredicate {
    /// Stop once the heaviest spanning-tree edge of the cluster exceeds
    /// the threshold.
    Distance(f64),
    /// Stop once the cluster holds more than this many nodes.
    Size(usize),
    Never,
}

impl StopPredicate {
    /// Evaluates the rule from the cluster size and the weight of its
    /// heaviest spanning-tree edge (`None` for a singleton).
    pub fn stops(&self, size: usize, max_edge: Option<f64>) -> bool {
        if size <= 1 {
            return false;
        }
        match *self {
            StopPredicate::Distance(theta) => max_edge.is_some_and(|w| w > theta),
            StopPredicate::Size(s) => size > s,
            StopPredicate::Never => false,
        }
    }

    /// `Stop_local(c)`. The induced subgraph must be connected.
    pub fn stop_local(&self, g: &Graph, c: &NodeSet) -> Result<bool, SlcError> {
        match self {
            StopPredicate::Size(_) | StopPredicate::Never => Ok(self.stops(c.len(), None)),
            StopPredicate::Distance(_) => {
                let t = CoreTree::build(g, c)?;
                Ok(self.stops(c.len(), t.max_edge().map(|e| e.w)))
            }
        }
    }
}

impl FromStr for StopPredicate {
    type Err = SlcError;

    /// `dist:<theta>`, `size:<s>` or `never`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SlcError::BadPredicate(s.to_string());
        if s == "never" {
            return Ok(StopPredicate::Never);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "dist" => {
                let theta: f64 = arg.parse().map_err(|_| bad())?;
                if !theta.is_finite() || theta < 0.0 {
                    return Err(bad());
                }
                Ok(StopPredicate::Distance(theta))
            }
            "size" => match arg.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(StopPredicate::Size(n)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StopPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopPredicate::Distance(t) => write!(f, "dist:{t}"),
            StopPredicate::Size(s) => write!(f, "size:{s}"),
            StopPredicate::Never => f.write_str("never"),
        }
    }
}

/// Disjoint clusters covering every node, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clustering {
    clusters: Vec<NodeSet>,
}

impl Clustering {
    pub fn new(mut clusters: Vec<NodeSet>, node_count: usize) -> Result<Self, SlcError> {
        let mut seen = vec![false; node_count];
        for c in &clusters {
            if c.is_empty() {
                return Err(SlcError::EmptyCluster);
            }
            for v in c.iter() {
                let slot = seen.get_mut(v as usize).ok_or(SlcError::UnknownNode(v))?;
                if std::mem::replace(slot, true) {
                    return Err(SlcError::NotAPartition);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(SlcError::NotAPartition);
        }
        clusters.sort_by_key(NodeSet::min);
        Ok(Clustering { clusters })
    }

    pub fn singletons(node_count: usize) -> Self {
        Clustering {
            clusters: (0..node_count as NodeId).map(NodeSet::singleton).collect(),
        }
    }

    pub fn clusters(&self) -> &[NodeSet] {
        &self.clusters
    }

    pub fn into_clusters(self) -> Vec<NodeSet> {
        self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.clusters.iter().map(NodeSet::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests;
