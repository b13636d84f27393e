//! Spanning trees of clusters and the merge hierarchy they induce.
//!
//! Splitting a cluster at its heaviest tree edge and recursing yields a
//! binary hierarchy whose internal nodes are exactly the candidate
//! sub-clusters of the core definition. [`CoreTree`] builds it once,
//! bottom-up, together with every node's lightest outgoing edge.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::SlcError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: f64,
}

/// Orders edges by weight alone; weights are unique within a graph.
#[derive(Clone, Copy, Debug)]
struct ByWeight(WeightedEdge);

impl PartialEq for ByWeight {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ByWeight {}

impl PartialOrd for ByWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .w
            .total_cmp(&other.0.w)
            .then((self.0.u, self.0.v).cmp(&(other.0.u, other.0.v)))
    }
}

fn check_members(g: &Graph, c: &NodeSet) -> Result<(), SlcError> {
    if !g.is_weighted() {
        return Err(SlcError::Unweighted);
    }
    match c.max() {
        None => Err(SlcError::EmptyCluster),
        Some(m) if m as usize >= g.node_count() => Err(SlcError::UnknownNode(m)),
        Some(_) => Ok(()),
    }
}

fn edges_from(g: &Graph, x: NodeId) -> impl Iterator<Item = WeightedEdge> + '_ {
    let ws = g.neighbor_weights(x).unwrap_or(&[]);
    g.neighbors(x)
        .iter()
        .zip(ws)
        .map(move |(&v, &w)| WeightedEdge { u: x, v, w })
}

/// Lightest edge with exactly one endpoint in `c`, oriented out of `c`.
pub fn min_outgoing(g: &Graph, c: &NodeSet) -> Result<Option<WeightedEdge>, SlcError> {
    check_members(g, c)?;
    Ok(c.iter()
        .flat_map(|x| edges_from(g, x))
        .filter(|e| !c.contains(e.v))
        .min_by(|a, b| a.w.total_cmp(&b.w)))
}

/// Weight of the lightest edge between `a` and `b`, or infinity.
pub fn cluster_distance(g: &Graph, a: &NodeSet, b: &NodeSet) -> Result<f64, SlcError> {
    check_members(g, a)?;
    check_members(g, b)?;
    if a.intersects(b) {
        return Err(SlcError::Overlap);
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    Ok(small
        .iter()
        .flat_map(|x| edges_from(g, x))
        .filter(|e| large.contains(e.v))
        .map(|e| e.w)
        .fold(f64::INFINITY, f64::min))
}

/// The two halves left after removing the heaviest spanning-tree edge.
pub fn split(g: &Graph, c: &NodeSet) -> Result<(NodeSet, NodeSet), SlcError> {
    CoreTree::build(g, c)?.split()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

#[derive(Clone, Debug)]
struct Node {
    /// Children (hierarchy indices); leaves have none.
    children: Option<(usize, usize)>,
    size: usize,
    min: NodeId,
    /// The tree edge whose addition formed this node.
    merge: Option<WeightedEdge>,
    minout: Option<WeightedEdge>,
    core: bool,
}

/// A cluster with its minimum spanning tree and merge hierarchy.
#[derive(Clone, Debug)]
pub struct CoreTree {
    members: NodeSet,
    ids: Vec<NodeId>,
    /// Tree edges in increasing weight order.
    mst: Vec<WeightedEdge>,
    /// Leaves first (one per member, in id order), root last.
    nodes: Vec<Node>,
}

impl CoreTree {
    /// Errors if the graph is unweighted, `c` is empty or names unknown
    /// nodes, or the subgraph induced by `c` is disconnected.
    pub fn build(g: &Graph, c: &NodeSet) -> Result<CoreTree, SlcError> {
        check_members(g, c)?;
        let ids = c.to_vec();
        let local = |v: NodeId| ids.binary_search(&v).ok();
        let k = ids.len();

        // Prim over the induced subgraph
        let mut in_tree = vec![false; k];
        let mut mst = Vec::with_capacity(k.saturating_sub(1));
        let mut heap = BinaryHeap::new();
        in_tree[0] = true;
        heap.extend(edges_from(g, ids[0]).map(|e| Reverse(ByWeight(e))));
        while let Some(Reverse(ByWeight(e))) = heap.pop() {
            let Some(j) = local(e.v) else { continue };
            if in_tree[j] {
                continue;
            }
            in_tree[j] = true;
            mst.push(e);
            heap.extend(edges_from(g, e.v).map(|e| Reverse(ByWeight(e))));
        }
        if mst.len() + 1 != k {
            return Err(SlcError::Disconnected);
        }
        mst.sort_by(|a, b| a.w.total_cmp(&b.w));

        // Kruskal over the tree edges, merging outgoing-edge heaps small to large
        let mut nodes: Vec<Node> = Vec::with_capacity(2 * k - 1);
        let mut heaps: Vec<BinaryHeap<Reverse<ByWeight>>> = Vec::with_capacity(2 * k - 1);
        for &x in &ids {
            let h: BinaryHeap<_> = edges_from(g, x).map(|e| Reverse(ByWeight(e))).collect();
            nodes.push(Node {
                children: None,
                size: 1,
                min: x,
                merge: None,
                minout: h.peek().map(|r| r.0 .0),
                core: true,
            });
            heaps.push(h);
        }
        let mut parent: Vec<usize> = (0..k).collect();
        let mut top: Vec<usize> = (0..k).collect();
        for &e in &mst {
            let (ra, rb) = (
                find(&mut parent, local(e.u).expect("member")),
                find(&mut parent, local(e.v).expect("member")),
            );
            let (a, b) = (top[ra], top[rb]);
            let (left, right) = if nodes[a].min < nodes[b].min { (a, b) } else { (b, a) };
            parent[rb] = ra;
            let mut h = std::mem::take(&mut heaps[a]);
            let mut other = std::mem::take(&mut heaps[b]);
            if h.len() < other.len() {
                std::mem::swap(&mut h, &mut other);
            }
            h.extend(other);
            while let Some(Reverse(ByWeight(out))) = h.peek() {
                match local(out.v) {
                    Some(j) if find(&mut parent, j) == ra => {
                        h.pop();
                    }
                    _ => break,
                }
            }
            let minout = h.peek().map(|r| r.0 .0);
            let lands_in = |from: usize, into: usize| {
                nodes[from].minout.map(|m| m.w.to_bits()) == Some(e.w.to_bits()) && nodes[into].core
            };
            let core = nodes[left].core && lands_in(left, right) && lands_in(right, left);
            nodes.push(Node {
                children: Some((left, right)),
                size: nodes[a].size + nodes[b].size,
                min: nodes[left].min,
                merge: Some(e),
                minout,
                core,
            });
            heaps.push(h);
            top[ra] = nodes.len() - 1;
        }
        Ok(CoreTree {
            members: c.clone(),
            ids,
            mst,
            nodes,
        })
    }

    pub fn members(&self) -> &NodeSet {
        &self.members
    }

    /// Spanning-tree edges in increasing weight order.
    pub fn mst(&self) -> &[WeightedEdge] {
        &self.mst
    }

    pub fn max_edge(&self) -> Option<WeightedEdge> {
        self.mst.last().copied()
    }

    fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Whether the whole cluster is a core: a singleton, or two cores that
    /// are each other's nearest clusters.
    pub fn is_core(&self) -> bool {
        self.nodes[self.root()].core
    }

    /// Lightest edge leaving the whole cluster.
    pub fn min_outgoing(&self) -> Option<WeightedEdge> {
        self.nodes[self.root()].minout
    }

    pub fn split(&self) -> Result<(NodeSet, NodeSet), SlcError> {
        match self.nodes[self.root()].children {
            Some((l, r)) => Ok((self.node_members(l), self.node_members(r))),
            None => Err(SlcError::Singleton),
        }
    }

    /// Maximal cores, ordered by smallest member.
    pub fn mcd(&self) -> Vec<NodeSet> {
        let mut out: Vec<NodeSet> = self
            .collect_nodes(|n| n.core)
            .into_iter()
            .map(|i| self.node_members(i))
            .collect();
        out.sort_by_key(NodeSet::min);
        out
    }

    /// Descends from the root and returns the first node on every path
    /// that satisfies `accept`. Leaves are always accepted.
    fn collect_nodes(&self, accept: impl Fn(&Node) -> bool) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root()];
        while let Some(i) = stack.pop() {
            let n = &self.nodes[i];
            match n.children {
                Some((l, r)) if !accept(n) => {
                    stack.push(r);
                    stack.push(l);
                }
                _ => out.push(i),
            }
        }
        out
    }

    fn node_members(&self, i: usize) -> NodeSet {
        let mut ids = Vec::with_capacity(self.nodes[i].size);
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            match self.nodes[j].children {
                Some((l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
                None => ids.push(self.ids[j]),
            }
        }
        NodeSet::from_unsorted(ids)
    }

    /// Maximal cores with, for each, its lightest outgoing edge, the
    /// weight of its heaviest tree edge, and the size of the cluster across
    /// that outgoing edge as far as this tree knows it.
    pub(crate) fn core_summaries(&self) -> Vec<CoreSummary> {
        let cores = self.collect_nodes(|n| n.core);
        let local = |v: NodeId| self.ids.binary_search(&v).ok();
        // far endpoint's component under tree edges lighter than the edge
        let mut queries: Vec<(f64, usize, usize)> = cores
            .iter()
            .enumerate()
            .filter_map(|(slot, &i)| {
                let e = self.nodes[i].minout?;
                Some((e.w, local(e.v)?, slot))
            })
            .collect();
        queries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k = self.ids.len();
        let mut parent: Vec<usize> = (0..k).collect();
        let mut size = vec![1usize; k];
        let mut partner = vec![1usize; cores.len()];
        let mut edges = self.mst.iter().peekable();
        for (w, j, slot) in queries {
            while let Some(e) = edges.next_if(|e| e.w < w) {
                let a = find(&mut parent, local(e.u).expect("member"));
                let b = find(&mut parent, local(e.v).expect("member"));
                let (a, b) = if size[a] < size[b] { (b, a) } else { (a, b) };
                parent[b] = a;
                size[a] += size[b];
            }
            partner[slot] = size[find(&mut parent, j)];
        }
        cores
            .into_iter()
            .zip(partner)
            .map(|(i, partner)| {
                let n = &self.nodes[i];
                CoreSummary {
                    members: self.node_members(i),
                    minout: n.minout,
                    max_weight: n.merge.map(|e| e.w),
                    partner,
                }
            })
            .collect()
    }

    /// Maximal cores that the predicate does not stop, splitting stopped
    /// ones until the pieces are unstopped (singletons always are).
    pub(crate) fn unstopped_cores(&self, p: &super::StopPredicate) -> Vec<NodeSet> {
        let mut out: Vec<NodeSet> = self
            .collect_nodes(|n| n.core && !p.stops(n.size, n.merge.map(|e| e.w)))
            .into_iter()
            .map(|i| self.node_members(i))
            .collect();
        out.sort_by_key(NodeSet::min);
        out
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CoreSummary {
    pub members: NodeSet,
    pub minout: Option<WeightedEdge>,
    pub max_weight: Option<f64>,
    pub partner: usize,
}
