//! Sorted, duplicate-free sets of node ids.
//!
//! Clusters are stored as maximal runs of consecutive ids. On graphs whose
//! ids follow the structure (paths, heap-ordered trees, dense components)
//! a cluster of thousands of ids collapses to a handful of runs, which is
//! what makes Hash-to-All feasible at the sizes the experiments need. On
//! randomly ordered ids the representation degrades to one run per id.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::NodeId;

/// Inclusive run `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub lo: NodeId,
    pub hi: NodeId,
}

impl Run {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize + 1
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct NodeSet {
    runs: Vec<Run>,
    len: usize,
}

impl NodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: NodeId) -> Self {
        NodeSet {
            runs: vec![Run { lo: v, hi: v }],
            len: 1,
        }
    }

    pub fn range(lo: NodeId, hi: NodeId) -> Self {
        if lo > hi {
            return Self::new();
        }
        let run = Run { lo, hi };
        NodeSet {
            len: run.len(),
            runs: vec![run],
        }
    }

    /// Builds a set from a strictly increasing sequence. Returns `None` if
    /// the sequence is not strictly increasing.
    pub fn from_sorted<I: IntoIterator<Item = NodeId>>(ids: I) -> Option<Self> {
        let mut set = NodeSet::new();
        for id in ids {
            if let Some(last) = set.max() {
                if id <= last {
                    return None;
                }
            }
            set.push_max(id);
        }
        Some(set)
    }

    pub fn from_unsorted<I: IntoIterator<Item = NodeId>>(ids: I) -> Self {
        let mut v: Vec<NodeId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        let mut set = NodeSet::new();
        for id in v {
            set.push_max(id);
        }
        set
    }

    fn from_runs_unchecked(runs: Vec<Run>) -> Self {
        let len = runs.iter().map(Run::len).sum();
        NodeSet { runs, len }
    }

    /// Appends an id larger than every current member.
    fn push_max(&mut self, id: NodeId) {
        match self.runs.last_mut() {
            Some(r) if r.hi.checked_add(1) == Some(id) => r.hi = id,
            _ => self.runs.push(Run { lo: id, hi: id }),
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn min(&self) -> Option<NodeId> {
        self.runs.first().map(|r| r.lo)
    }

    pub fn max(&self) -> Option<NodeId> {
        self.runs.last().map(|r| r.hi)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        // first run with hi >= v
        let i = self.runs.partition_point(|r| r.hi < v);
        i < self.runs.len() && self.runs[i].lo <= v
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.runs.iter().flat_map(|r| r.lo..=r.hi)
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }

    /// Members `>= v`.
    pub fn at_least(&self, v: NodeId) -> NodeSet {
        let i = self.runs.partition_point(|r| r.hi < v);
        let mut runs = self.runs[i..].to_vec();
        if let Some(first) = runs.first_mut() {
            first.lo = first.lo.max(v);
        }
        Self::from_runs_unchecked(runs)
    }

    /// Members `<= v`.
    pub fn at_most(&self, v: NodeId) -> NodeSet {
        let i = self.runs.partition_point(|r| r.lo <= v);
        let mut runs = self.runs[..i].to_vec();
        if let Some(last) = runs.last_mut() {
            last.hi = last.hi.min(v);
        }
        Self::from_runs_unchecked(runs)
    }

    pub fn insert(&mut self, v: NodeId) {
        if self.contains(v) {
            return;
        }
        let mut runs = std::mem::take(&mut self.runs);
        runs.push(Run { lo: v, hi: v });
        runs.sort_unstable();
        *self = Self::from_runs_unchecked(coalesce(runs));
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet::union_all([self, other])
    }

    /// Union of many sets in one pass over their runs.
    pub fn union_all<'a, I>(sets: I) -> NodeSet
    where
        I: IntoIterator<Item = &'a NodeSet>,
    {
        let mut scratch = Vec::new();
        for s in sets {
            scratch.extend_from_slice(&s.runs);
        }
        Self::from_run_soup(scratch)
    }

    /// Builds a set from arbitrary (possibly overlapping, unordered) runs.
    pub(crate) fn from_run_soup(mut runs: Vec<Run>) -> NodeSet {
        // Inputs usually arrive nearly sorted (mapper order), which the
        // pattern-defeating sort handles in close to linear time.
        runs.sort_unstable();
        Self::from_runs_unchecked(coalesce(runs))
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.runs.iter().all(|r| {
            let i = other.runs.partition_point(|o| o.hi < r.lo);
            i < other.runs.len() && other.runs[i].lo <= r.lo && other.runs[i].hi >= r.hi
        })
    }

    pub fn intersects(&self, other: &NodeSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.runs.len() && j < other.runs.len() {
            let (a, b) = (self.runs[i], other.runs[j]);
            if a.hi < b.lo {
                i += 1;
            } else if b.hi < a.lo {
                j += 1;
            } else {
                return true;
            }
        }
        false
    }
}

/// Merges sorted runs that overlap or touch.
fn coalesce(sorted: Vec<Run>) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::with_capacity(sorted.len().min(64));
    for r in sorted {
        match out.last_mut() {
            Some(last) if r.lo <= last.hi.saturating_add(1) => {
                last.hi = last.hi.max(r.hi);
            }
            _ => out.push(r),
        }
    }
    out
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<T: IntoIterator<Item = NodeId>>(iter: T) -> Self {
        NodeSet::from_unsorted(iter)
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}
