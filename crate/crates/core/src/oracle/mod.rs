//! Ground truth for tests: union-find and flood-fill components, and a
//! sequential single-linkage clustering.
//!
//! Nothing here uses the round engine, the schemes or the cluster-tree
//! code.

mod cores;

use std::collections::VecDeque;

use crate::error::SlcError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::slc::StopPredicate;
use crate::NodeId;

pub use cores::{connected_subsets, core_by_definition, cores_within, nearest_merge_slc};

/// Union by rank with path halving.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`; returns the new root, or `None` if
    /// they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        if self.rank[ra] == self.rank[rb] {
            self.rank[ra] += 1;
        }
        Some(ra)
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    /// All sets, ordered by smallest member.
    pub fn sets(&mut self) -> Vec<NodeSet> {
        let n = self.parent.len();
        let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            members[r].push(x as NodeId);
        }
        let mut out: Vec<NodeSet> = members
            .into_iter()
            .filter(|m| !m.is_empty())
            .map(|m| NodeSet::from_sorted(m).expect("pushed in order"))
            .collect();
        out.sort_by_key(NodeSet::min);
        out
    }
}

pub fn union_find_components(g: &Graph) -> Vec<NodeSet> {
    let mut ds = DisjointSet::new(g.node_count());
    for (u, v) in g.edges() {
        ds.union(u as usize, v as usize);
    }
    ds.sets()
}

pub fn bfs_components(g: &Graph) -> Vec<NodeSet> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s as NodeId];
        let mut queue = VecDeque::from([s as NodeId]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        out.push(NodeSet::from_unsorted(comp));
    }
    out
}

/// Sequential single-linkage clustering.
///
/// Edges are scanned in increasing weight; each edge joining two clusters
/// is their closest pair at that moment. The merge happens unless it would
/// be stopped or either side is already final, in which case both sides
/// become final: a cluster's only possible next merge is across its
/// lightest outgoing edge.
pub fn centralized_slc(g: &Graph, p: &StopPredicate) -> Result<Vec<NodeSet>, SlcError> {
    if !g.is_weighted() {
        return Err(SlcError::Unweighted);
    }
    let mut edges: Vec<(f64, NodeId, NodeId)> = g.weighted_edges().map(|(u, v, w)| (w, u, v)).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = g.node_count();
    let mut ds = DisjointSet::new(n);
    let mut frozen = vec![false; n];
    for (w, u, v) in edges {
        let (a, b) = (ds.find(u as usize), ds.find(v as usize));
        if a == b {
            continue;
        }
        let merged = ds.set_size(a) + ds.set_size(b);
        let stopped = match *p {
            StopPredicate::Distance(theta) => w > theta,
            StopPredicate::Size(s) => merged > s,
            StopPredicate::Never => false,
        };
        if frozen[a] || frozen[b] || stopped {
            frozen[a] = true;
            frozen[b] = true;
            continue;
        }
        let r = ds.union(a, b).expect("distinct roots");
        frozen[r] = false;
    }
    Ok(ds.sets())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path, random};

    #[test]
    fn components_basics() {
        let g = random(5, 0.0, 1, false).unwrap();
        assert_eq!(union_find_components(&g).len(), 5);
        assert_eq!(union_find_components(&path(10).unwrap()), vec![NodeSet::range(0, 9)]);
    }

    #[test]
    fn union_find_matches_bfs() {
        for seed in 0..100 {
            let n = 20 + (seed as usize * 7) % 180;
            let g = random(n, 1.5 / n as f64, seed, false).unwrap();
            assert_eq!(union_find_components(&g), bfs_components(&g), "seed {seed}");
        }
    }

    #[test]
    fn slc_extremes() {
        let g = random(30, 0.2, 4, true).unwrap();
        let singles: Vec<NodeSet> = (0..30).map(NodeSet::singleton).collect();
        assert_eq!(centralized_slc(&g, &StopPredicate::Distance(0.0)).unwrap(), singles);
        assert_eq!(
            centralized_slc(&g, &StopPredicate::Distance(1.0)).unwrap(),
            union_find_components(&g)
        );
        assert!(matches!(
            centralized_slc(&path(3).unwrap(), &StopPredicate::Never),
            Err(SlcError::Unweighted)
        ));
    }

    #[test]
    fn slc_two_components() {
        let g = Graph::from_weighted_edges(5, [(0, 1, 0.2), (1, 2, 0.7), (3, 4, 0.9)]).unwrap();
        let want = vec![NodeSet::range(0, 2), NodeSet::range(3, 4)];
        assert_eq!(centralized_slc(&g, &StopPredicate::Distance(1.0)).unwrap(), want);
        // size 2: {0,1} forms, then {0,1,2} would exceed the cap
        let got = centralized_slc(&g, &StopPredicate::Size(2)).unwrap();
        assert_eq!(
            got,
            vec![NodeSet::range(0, 1), NodeSet::singleton(2), NodeSet::range(3, 4)]
        );
    }

    #[test]
    fn merge_order_does_not_matter() {
        let preds = [
            StopPredicate::Distance(0.3),
            StopPredicate::Distance(0.7),
            StopPredicate::Size(2),
            StopPredicate::Size(4),
            StopPredicate::Never,
        ];
        for seed in 0..60 {
            let n = 3 + seed as usize % 8;
            let g = random(n, 0.5, seed, true).unwrap();
            for p in &preds {
                let want = centralized_slc(&g, p).unwrap();
                for order in 0..6 {
                    assert_eq!(
                        nearest_merge_slc(&g, p, order).unwrap(),
                        want,
                        "seed {seed} {p} order {order}"
                    );
                }
            }
        }
    }

    #[test]
    fn core_definition_examples() {
        let set = |ids: &[NodeId]| NodeSet::from_unsorted(ids.iter().copied());
        // 0 -0.1- 1 -0.5- 2: {1,2} is not a core since 1 prefers 0
        let g = Graph::from_weighted_edges(3, [(0, 1, 0.1), (1, 2, 0.5)]).unwrap();
        assert_eq!(core_by_definition(&g, &set(&[0, 1])), Ok(true));
        assert_eq!(core_by_definition(&g, &set(&[1, 2])), Ok(false));
        assert_eq!(core_by_definition(&g, &set(&[0, 1, 2])), Ok(true));
        assert_eq!(core_by_definition(&g, &set(&[0, 2])), Err(SlcError::Disconnected));
        assert_eq!(connected_subsets(&g, &NodeSet::range(0, 2)).len(), 6);
        assert_eq!(cores_within(&g, &NodeSet::range(0, 2)).unwrap().len(), 5);
    }
}
