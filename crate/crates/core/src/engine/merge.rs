//! K-way merge of sorted sequences with duplicate removal, the reducer-side
//! half of secondary sorting.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::EngineError;
use crate::nodeset::{NodeSet, Run};
use crate::NodeId;

/// Merges strictly increasing sequences into their sorted union in a single
/// heap-driven pass. Duplicates are dropped as they surface at the head of
/// the merge, so no intermediate multiset is built.
pub fn merge_sorted_dedup<S: AsRef<[NodeId]>>(seqs: &[S]) -> Result<Vec<NodeId>, EngineError> {
    for (index, s) in seqs.iter().enumerate() {
        if s.as_ref().windows(2).any(|w| w[0] >= w[1]) {
            return Err(EngineError::Unsorted { index });
        }
    }
    let mut heap = BinaryHeap::with_capacity(seqs.len());
    for (i, s) in seqs.iter().enumerate() {
        if let Some(&x) = s.as_ref().first() {
            heap.push(Reverse((x, i, 0usize)));
        }
    }
    let mut out: Vec<NodeId> = Vec::new();
    while let Some(Reverse((x, i, pos))) = heap.pop() {
        if out.last() != Some(&x) {
            out.push(x);
        }
        if let Some(&next) = seqs[i].as_ref().get(pos + 1) {
            heap.push(Reverse((next, i, pos + 1)));
        }
    }
    Ok(out)
}

/// Run-level counterpart of [`merge_sorted_dedup`]: merges the runs of
/// several sets, coalescing overlaps and neighbours on the fly.
pub fn merge_runs<'a, I>(sets: I) -> NodeSet
where
    I: IntoIterator<Item = &'a NodeSet>,
{
    let lists: Vec<&[Run]> = sets.into_iter().map(NodeSet::runs).filter(|r| !r.is_empty()).collect();
    match lists.len() {
        0 => return NodeSet::new(),
        1 => return NodeSet::from_run_soup(lists[0].to_vec()),
        _ => {}
    }
    let mut heap: BinaryHeap<Reverse<(Run, usize, usize)>> =
        lists.iter().enumerate().map(|(i, r)| Reverse((r[0], i, 0))).collect();
    let mut out: Vec<Run> = Vec::new();
    while let Some(Reverse((run, i, pos))) = heap.pop() {
        match out.last_mut() {
            Some(last) if run.lo <= last.hi.saturating_add(1) => last.hi = last.hi.max(run.hi),
            _ => out.push(run),
        }
        if let Some(&next) = lists[i].get(pos + 1) {
            heap.push(Reverse((next, i, pos + 1)));
        }
    }
    NodeSet::from_run_soup(out)
}
