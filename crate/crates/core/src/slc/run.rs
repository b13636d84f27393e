//! The distributed clustering driver.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::stopping::{induced_pieces, split_repair, stop_round};
use super::{Clustering, StopPredicate};
use crate::cc::{HashToAll, HashToMin};
use crate::engine::{Engine, HashScheme, RoundMetrics};
use crate::error::SlcError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;

/// Components scheme that grows the clusters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlcScheme {
    HashToAll,
    HashToMin,
}

impl SlcScheme {
    pub fn selector(&self) -> &'static str {
        match self {
            SlcScheme::HashToAll => "hash-to-all",
            SlcScheme::HashToMin => "hash-to-min",
        }
    }
}

impl FromStr for SlcScheme {
    type Err = SlcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hash-to-all" => Ok(SlcScheme::HashToAll),
            "hash-to-min" => Ok(SlcScheme::HashToMin),
            other => Err(SlcError::UnsupportedScheme(other.to_string())),
        }
    }
}

impl fmt::Display for SlcScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.selector())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlcResult {
    pub clustering: Clustering,
    /// Components rounds executed.
    pub rounds: usize,
    /// Whether the stopping test fired (as opposed to the clusters
    /// reaching a fixpoint).
    pub stopped: bool,
    /// False when `max_rounds` ran out first; the clustering is then the
    /// repair of the last round's clusters.
    pub complete: bool,
    pub per_round: Vec<RoundMetrics>,
}

/// Grows clusters from closed neighbourhoods with `scheme`, tests the stop
/// predicate after every round, then repairs every cluster and gives each
/// node the largest repaired cluster that contains it.
pub fn run_slc(g: &Graph, scheme: SlcScheme, p: &StopPredicate, max_rounds: usize) -> Result<SlcResult, SlcError> {
    match scheme {
        SlcScheme::HashToAll => drive(g, &HashToAll, p, max_rounds),
        SlcScheme::HashToMin => drive(g, &HashToMin, p, max_rounds),
    }
}

fn drive<S: HashScheme>(g: &Graph, scheme: &S, p: &StopPredicate, max_rounds: usize) -> Result<SlcResult, SlcError> {
    if !g.is_weighted() {
        return Err(SlcError::Unweighted);
    }
    if max_rounds == 0 {
        return Err(crate::error::EngineError::ZeroRounds.into());
    }
    let mut engine = Engine::new(g, scheme);
    let mut per_round = Vec::new();
    let mut stopped = false;
    while per_round.len() < max_rounds {
        per_round.push(engine.step()?);
        if engine.converged() {
            break;
        }
        if stop_round(g, engine.state().clusters(), p)? {
            stopped = true;
            break;
        }
    }
    let complete = stopped || engine.converged();
    let clustering = repair_all(g, engine.state().clusters(), p)?;
    Ok(SlcResult {
        clustering,
        rounds: per_round.len(),
        stopped,
        complete,
        per_round,
    })
}

/// Repairs every distinct cluster piece and assigns each node the largest
/// repaired cluster containing it (ties to the smaller minimum).
fn repair_all(g: &Graph, clusters: &[NodeSet], p: &StopPredicate) -> Result<Clustering, SlcError> {
    let n = g.node_count();
    let mut seen = HashSet::new();
    let mut valid: Vec<NodeSet> = Vec::new();
    for c in clusters.iter().filter(|c| !c.is_empty()) {
        if !seen.insert(c) {
            continue;
        }
        for piece in induced_pieces(g, c) {
            valid.extend(split_repair(g, &piece, p)?);
        }
    }
    valid.sort_by_cached_key(|c| (std::cmp::Reverse(c.len()), c.to_vec()));
    valid.dedup();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, c) in valid.iter().enumerate() {
        for v in c.iter() {
            owner[v as usize].get_or_insert(i);
        }
    }
    let mut chosen: Vec<NodeSet> = Vec::new();
    let mut used = vec![false; valid.len()];
    for (v, owned) in owner.iter().enumerate() {
        match *owned {
            Some(i) if !used[i] => {
                used[i] = true;
                chosen.push(valid[i].clone());
            }
            Some(_) => {}
            None => chosen.push(NodeSet::singleton(v as crate::NodeId)),
        }
    }
    Clustering::new(chosen, n)
}
