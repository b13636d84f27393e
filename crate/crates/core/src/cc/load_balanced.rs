//! Hash-to-Min with a size threshold, followed by plain Hash-to-Min on the
//! graph contracted along the first phase's clusters.
//!
//! A cluster larger than `tau` at node `v` splits its emission: members
//! `u ≤ v` go to the minimum as usual, members `u > v` go to `v` itself and
//! learn `v` as their minimum.

use crate::engine::{self, ClusterState, Emitter, HashScheme, Incoming, InitMode, RunResult};
use crate::error::EngineError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

use super::{rooted_clusters, sorted_components, HashToMin};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LbConfig {
    tau: usize,
}

impl LbConfig {
    pub fn new(tau: usize) -> Result<Self, EngineError> {
        if tau == 0 {
            return Err(EngineError::InvalidTau);
        }
        Ok(LbConfig { tau })
    }

    /// No cluster is ever split.
    pub fn unbounded() -> Self {
        LbConfig { tau: usize::MAX }
    }

    pub fn tau(&self) -> usize {
        self.tau
    }
}

/// First phase on its own.
#[derive(Clone, Copy, Debug)]
pub struct LoadBalancedPhase {
    pub cfg: LbConfig,
}

impl HashScheme for LoadBalancedPhase {
    fn name(&self) -> &str {
        "hash-to-min-lb"
    }

    fn init_mode(&self) -> InitMode {
        InitMode::ClosedNeighborhood
    }

    fn map<'a>(&self, round: usize, v: NodeId, c: &'a NodeSet, g: &'a Graph, out: &mut Emitter<'a>) {
        if c.len() <= self.cfg.tau {
            return HashToMin.map(round, v, c, g, out);
        }
        let low = c.at_most(v);
        if let Some(min) = low.min() {
            for u in low.iter().skip(1) {
                out.send_id(u, min);
            }
            out.send_set(min, low);
        }
        let high = c.at_least(v + 1);
        if !high.is_empty() {
            for u in high.iter() {
                out.send_id(u, v);
            }
            out.send_set(v, high);
        }
    }

    fn reduce(&self, _round: usize, _v: NodeId, incoming: &Incoming<'_>, _prev: &NodeSet) -> NodeSet {
        incoming.union()
    }

    /// Clusters rooted at their own minimum; other nodes are not covered
    /// until the second phase.
    fn export(&self, state: &ClusterState) -> Vec<NodeSet> {
        rooted_clusters(state)
    }
}

/// Node groups of a first-phase fixpoint: `x` joins the group labelled
/// `min C_x`, or its own group when `C_x` is empty. Groups are returned in
/// order of their smallest member.
pub fn contraction_groups(state: &ClusterState) -> Vec<NodeSet> {
    let labels: Vec<NodeId> = (0..state.node_count() as NodeId)
        .map(|x| state.cluster(x).min().unwrap_or(x))
        .collect();
    super::group_nodes(&labels)
}

/// Contracts every group to one super-node (numbered in group order) and
/// keeps one super-edge per pair of groups joined by an original edge.
pub fn contract(g: &Graph, groups: &[NodeSet]) -> Graph {
    let mut owner = vec![0 as NodeId; g.node_count()];
    for (i, grp) in groups.iter().enumerate() {
        for x in grp.iter() {
            owner[x as usize] = i as NodeId;
        }
    }
    let edges = g
        .edges()
        .map(|(u, v)| (owner[u as usize], owner[v as usize]))
        .filter(|(a, b)| a != b);
    Graph::from_edges(groups.len(), edges).expect("super-edges join distinct groups")
}

/// Both phases. Metrics of the second phase follow those of the first, with
/// rounds numbered continuously; `max_rounds` bounds the total.
pub fn run_load_balanced(g: &Graph, cfg: LbConfig, max_rounds: usize) -> Result<RunResult, EngineError> {
    let first = engine::run(g, &LoadBalancedPhase { cfg }, max_rounds)?;
    let r1 = first.rounds;
    let mut result = RunResult {
        components: Vec::new(),
        phase1_rounds: Some(r1),
        ..first
    };
    if !result.converged {
        return Ok(result);
    }
    result.converged = false;
    if r1 >= max_rounds {
        return Ok(result);
    }
    let groups = contraction_groups(&result.final_state);
    let h = contract(g, &groups);
    let second = engine::run(&h, &HashToMin, max_rounds - r1)?;
    result
        .per_round
        .extend(second.per_round.iter().map(|m| engine::RoundMetrics {
            round: m.round + r1,
            ..*m
        }));
    result.rounds += second.rounds;
    result.converged = second.converged;
    if second.converged {
        let expanded = second
            .components
            .iter()
            .map(|c| NodeSet::union_all(c.iter().map(|s| &groups[s as usize])))
            .collect();
        result.components = sorted_components(expanded);
    }
    Ok(result)
}
