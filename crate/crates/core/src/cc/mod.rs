//! Connected-components hashing schemes and a selector that runs any of
//! them end to end.

mod alternating;
mod hash_min;
mod hash_to_all;
mod hash_to_min;
mod load_balanced;

use std::fmt;
use std::str::FromStr;

pub use alternating::{greater_set, phase, Alternating, Phase};
pub use hash_min::HashMin;
pub use hash_to_all::HashToAll;
pub use hash_to_min::HashToMin;
pub use load_balanced::{contract, contraction_groups, run_load_balanced, LbConfig, LoadBalancedPhase};

use crate::engine::{self, ClusterState, RunResult};
use crate::error::EngineError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

/// Components ordered by their smallest member.
pub(crate) fn sorted_components(mut comps: Vec<NodeSet>) -> Vec<NodeSet> {
    comps.sort_by_key(NodeSet::min);
    comps
}

/// Groups node ids by label, groups ordered by smallest member.
pub(crate) fn group_nodes(labels: &[NodeId]) -> Vec<NodeSet> {
    let mut order: Vec<(NodeId, NodeId)> = labels.iter().enumerate().map(|(v, &l)| (l, v as NodeId)).collect();
    order.sort_unstable();
    let mut groups = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let j = i + order[i..].partition_point(|&(l, _)| l == order[i].0);
        groups.push(NodeSet::from_sorted(order[i..j].iter().map(|&(_, v)| v)).expect("sorted"));
        i = j;
    }
    sorted_components(groups)
}

/// Groups nodes by the single label each one holds.
pub(crate) fn group_by_label(state: &ClusterState) -> Vec<NodeSet> {
    let labels: Vec<NodeId> = (0..state.node_count() as NodeId)
        .map(|v| state.cluster(v).min().unwrap_or(v))
        .collect();
    group_nodes(&labels)
}

/// `{C_v : min C_v = v}`
pub(crate) fn rooted_clusters(state: &ClusterState) -> Vec<NodeSet> {
    state
        .clusters()
        .iter()
        .enumerate()
        .filter(|(v, c)| c.min() == Some(*v as NodeId))
        .map(|(_, c)| c.clone())
        .collect()
}

/// A scheme selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    HashMin,
    HashToAll,
    HashToMin,
    HgtmAlt,
    HashToMinLb(LbConfig),
}

impl Algorithm {
    pub const SELECTORS: [&'static str; 5] = ["hash-min", "hash-to-all", "hash-to-min", "hgtm-alt", "hash-to-min-lb"];

    /// Parses a selector; `tau` is required by `hash-to-min-lb` and
    /// ignored otherwise (`None` means unbounded).
    pub fn parse(name: &str, tau: Option<usize>) -> Result<Self, EngineError> {
        Ok(match name {
            "hash-min" => Algorithm::HashMin,
            "hash-to-all" => Algorithm::HashToAll,
            "hash-to-min" => Algorithm::HashToMin,
            "hgtm-alt" => Algorithm::HgtmAlt,
            "hash-to-min-lb" => Algorithm::HashToMinLb(match tau {
                Some(t) => LbConfig::new(t)?,
                None => LbConfig::unbounded(),
            }),
            other => return Err(EngineError::UnknownAlgorithm(other.to_string())),
        })
    }

    pub fn selector(&self) -> &'static str {
        match self {
            Algorithm::HashMin => "hash-min",
            Algorithm::HashToAll => "hash-to-all",
            Algorithm::HashToMin => "hash-to-min",
            Algorithm::HgtmAlt => "hgtm-alt",
            Algorithm::HashToMinLb(_) => "hash-to-min-lb",
        }
    }

    pub fn run(&self, g: &Graph, max_rounds: usize) -> Result<RunResult, EngineError> {
        match self {
            Algorithm::HashMin => engine::run(g, &HashMin, max_rounds),
            Algorithm::HashToAll => engine::run(g, &HashToAll, max_rounds),
            Algorithm::HashToMin => engine::run(g, &HashToMin, max_rounds),
            Algorithm::HgtmAlt => engine::run(g, &Alternating, max_rounds),
            Algorithm::HashToMinLb(cfg) => run_load_balanced(g, *cfg, max_rounds),
        }
    }
}

impl FromStr for Algorithm {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::parse(s, None)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::HashToMinLb(cfg) if cfg.tau() != usize::MAX => {
                write!(f, "{}(tau={})", self.selector(), cfg.tau())
            }
            _ => f.write_str(self.selector()),
        }
    }
}
