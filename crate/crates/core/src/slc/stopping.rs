//! The per-round stopping test and the repair of over-merged clusters.

use std::collections::{HashMap, HashSet, VecDeque};

use super::tree::{CoreSummary, CoreTree};
use super::StopPredicate;
use crate::error::SlcError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

/// Connected pieces of the subgraph induced by `c`.
pub(crate) fn induced_pieces(g: &Graph, c: &NodeSet) -> Vec<NodeSet> {
    let mut seen: HashSet<NodeId> = HashSet::with_capacity(c.len());
    let mut out = Vec::new();
    for s in c.iter() {
        if !seen.insert(s) {
            continue;
        }
        let mut piece = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if c.contains(y) && seen.insert(y) {
                    piece.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(NodeSet::from_unsorted(piece));
    }
    out
}

/// Stop flag of one maximal core: whether its next merge, with the
/// cluster across its lightest outgoing edge as far as the piece knows it,
/// would be stopped. A core with no outgoing edge has no next merge.
pub(crate) fn core_flag(core: &CoreSummary, p: &StopPredicate) -> bool {
    let Some(e) = core.minout else {
        return true;
    };
    let heaviest = core.max_weight.map_or(e.w, |m| m.max(e.w));
    p.stops(core.members.len() + core.partner, Some(heaviest))
}

/// Whether one stop flag per node, each taken from the largest core the
/// node receives, is set everywhere. Identical cores reported by different
/// clusters combine their flags with OR; ties in size go to the core with
/// the smaller minimum. Nodes not covered by any cluster count as
/// singleton clusters.
pub fn stop_round(g: &Graph, clusters: &[NodeSet], p: &StopPredicate) -> Result<bool, SlcError> {
    if matches!(p, StopPredicate::Never) {
        return Ok(false);
    }
    if !g.is_weighted() {
        return Err(SlcError::Unweighted);
    }
    let n = g.node_count();
    let mut distinct: Vec<&NodeSet> = Vec::new();
    let mut seen = HashSet::new();
    let mut covered = vec![false; n];
    for c in clusters.iter().filter(|c| !c.is_empty()) {
        if let Some(m) = c.max().filter(|&m| m as usize >= n) {
            return Err(SlcError::UnknownNode(m));
        }
        if seen.insert(c) {
            distinct.push(c);
            for v in c.iter() {
                covered[v as usize] = true;
            }
        }
    }
    let extra: Vec<NodeSet> = (0..n as NodeId)
        .filter(|&v| !covered[v as usize])
        .map(NodeSet::singleton)
        .collect();
    distinct.extend(extra.iter());

    let mut flags: HashMap<NodeSet, bool> = HashMap::new();
    for c in distinct {
        for piece in induced_pieces(g, c) {
            let tree = CoreTree::build(g, &piece)?;
            for core in tree.core_summaries() {
                let f = core_flag(&core, p);
                *flags.entry(core.members).or_insert(false) |= f;
            }
        }
    }
    // each node keeps its largest core
    let mut ranked: Vec<(NodeSet, bool)> = flags.into_iter().collect();
    ranked.sort_by_cached_key(|(c, _)| (std::cmp::Reverse(c.len()), c.to_vec()));
    let mut best: Vec<Option<bool>> = vec![None; n];
    for (core, flag) in &ranked {
        for v in core.iter() {
            best[v as usize].get_or_insert(*flag);
        }
    }
    Ok(best.iter().all(|b| *b == Some(true)))
}

/// Splits a possibly over-merged cluster into valid clusters: each maximal
/// core is kept when the predicate does not stop it, and otherwise split
/// into its halves, recursively.
pub fn split_repair(g: &Graph, c: &NodeSet, p: &StopPredicate) -> Result<Vec<NodeSet>, SlcError> {
    Ok(CoreTree::build(g, c)?.unstopped_cores(p))
}
