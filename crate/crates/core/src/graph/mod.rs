//! Undirected graphs over compact node ids, with optional unique edge weights.

mod gen;
mod io;

use std::collections::{HashMap, HashSet, VecDeque};

pub use gen::{complete_binary_tree, path, random, relabel_random, star};
pub use io::{load_edge_list, parse_edge_list, write_edge_list};

use crate::error::GraphError;
use crate::NodeId;

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    /// Parallel to `adj` when the graph is weighted.
    weights: Option<Vec<Vec<f64>>>,
    /// Original ids for graphs loaded from a file.
    labels: Option<Vec<u64>>,
    edge_count: usize,
}

impl Graph {
    /// Builds an unweighted graph. Duplicate edges are merged; self-loops
    /// are rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adj = vec![Vec::new(); node_count];
        for (u, v) in edges {
            check_endpoints(u, v, node_count)?;
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            weights: None,
            labels: None,
            edge_count: edge_count / 2,
        })
    }

    /// Builds a weighted graph. Every weight must lie in (0, 1] and no two
    /// edges may share a weight.
    pub fn from_weighted_edges<I>(node_count: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut lists: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); node_count];
        let mut seen_weights = HashSet::new();
        let mut seen_edges = HashSet::new();
        for (u, v, w) in edges {
            check_endpoints(u, v, node_count)?;
            if !(w > 0.0 && w <= 1.0) {
                return Err(GraphError::WeightOutOfRange(w));
            }
            if !seen_weights.insert(w.to_bits()) {
                return Err(GraphError::DuplicateWeight(w));
            }
            if !seen_edges.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u.min(v) as u64, u.max(v) as u64));
            }
            lists[u as usize].push((v, w));
            lists[v as usize].push((u, w));
        }
        let mut adj = Vec::with_capacity(node_count);
        let mut weights = Vec::with_capacity(node_count);
        for mut list in lists {
            list.sort_unstable_by_key(|&(v, _)| v);
            adj.push(list.iter().map(|&(v, _)| v).collect());
            weights.push(list.iter().map(|&(_, w)| w).collect());
        }
        Ok(Graph {
            adj,
            weights: Some(weights),
            labels: None,
            edge_count: seen_edges.len(),
        })
    }

    pub(crate) fn with_labels(mut self, labels: Vec<u64>) -> Self {
        debug_assert_eq!(labels.len(), self.adj.len());
        self.labels = Some(labels);
        self
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v as usize]
    }

    /// Weights aligned with `neighbors(v)`.
    pub fn neighbor_weights(&self, v: NodeId) -> Option<&[f64]> {
        self.weights.as_ref().map(|w| w[v as usize].as_slice())
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let i = self.adj[u as usize].binary_search(&v).ok()?;
        self.weights.as_ref().map(|w| w[u as usize][i])
    }

    /// Original id of `v` (itself when the graph was not loaded from a file).
    pub fn original_id(&self, v: NodeId) -> u64 {
        match &self.labels {
            Some(l) => l[v as usize],
            None => v as u64,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.adj.len() as NodeId
    }

    /// Every edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter().filter(move |&&v| u < v).map(move |&v| (u, v))
        })
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.edges().map(|(u, v)| (u, v, self.weight(u, v).unwrap_or(f64::NAN)))
    }

    /// Full scan of the structural invariants: symmetric sorted adjacency
    /// without self-loops, and pairwise distinct weights.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.node_count();
        let mut weights = HashMap::new();
        for u in self.nodes() {
            let list = self.neighbors(u);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::InvalidArgument(format!(
                    "adjacency of {u} is not strictly sorted"
                )));
            }
            for &v in list {
                check_endpoints(u, v, n)?;
                if !self.has_edge(v, u) {
                    return Err(GraphError::InvalidArgument(format!(
                        "edge ({u}, {v}) is missing its reverse"
                    )));
                }
                if let Some(w) = self.weight(u, v) {
                    if self.weight(v, u) != Some(w) {
                        return Err(GraphError::InvalidArgument(format!(
                            "edge ({u}, {v}) has asymmetric weight"
                        )));
                    }
                    if u < v && weights.insert(w.to_bits(), (u, v)).is_some() {
                        return Err(GraphError::DuplicateWeight(w));
                    }
                }
            }
        }
        Ok(())
    }

    /// Returns the graph with every id `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[NodeId]) -> Graph {
        let n = self.node_count();
        assert_eq!(perm.len(), n, "permutation size mismatch");
        let mut adj = vec![Vec::new(); n];
        let mut weights = self.weights.as_ref().map(|_| vec![Vec::new(); n]);
        let mut labels = self.labels.as_ref().map(|_| vec![0u64; n]);
        for u in self.nodes() {
            let nu = perm[u as usize] as usize;
            let mut list: Vec<(NodeId, f64)> = self
                .neighbors(u)
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let w = self.weights.as_ref().map_or(0.0, |w| w[u as usize][i]);
                    (perm[v as usize], w)
                })
                .collect();
            list.sort_unstable_by_key(|&(v, _)| v);
            adj[nu] = list.iter().map(|&(v, _)| v).collect();
            if let Some(ws) = weights.as_mut() {
                ws[nu] = list.iter().map(|&(_, w)| w).collect();
            }
            if let (Some(out), Some(src)) = (labels.as_mut(), self.labels.as_ref()) {
                out[nu] = src[u as usize];
            }
        }
        Graph {
            adj,
            weights,
            labels,
            edge_count: self.edge_count,
        }
    }

    /// Hop distances from `src`; `usize::MAX` marks unreachable nodes.
    pub fn bfs(&self, src: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize] + 1;
            for &v in self.neighbors(u) {
                if dist[v as usize] == usize::MAX {
                    dist[v as usize] = d;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Largest component diameter.
    ///
    /// Exact (BFS from every node) up to [`EXACT_DIAMETER_LIMIT`] nodes.
    /// Beyond that, each component is measured with a double sweep from a
    /// few sources, which is exact on trees and a lower bound otherwise.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        let n = self.node_count();
        if n == 0 {
            return Err(GraphError::InvalidArgument("diameter of an empty graph".into()));
        }
        let ecc = |dist: &[usize]| -> (usize, NodeId) {
            let mut best = (0, 0);
            for (v, &d) in dist.iter().enumerate() {
                if d != usize::MAX && d >= best.0 {
                    best = (d, v as NodeId);
                }
            }
            best
        };
        if n <= EXACT_DIAMETER_LIMIT {
            return Ok(self.nodes().map(|v| ecc(&self.bfs(v)).0).max().unwrap_or(0));
        }
        let mut seen = vec![false; n];
        let mut best = 0;
        for start in self.nodes() {
            if seen[start as usize] {
                continue;
            }
            let dist = self.bfs(start);
            let members: Vec<NodeId> = self.nodes().filter(|&v| dist[v as usize] != usize::MAX).collect();
            for &v in &members {
                seen[v as usize] = true;
            }
            // double sweep from the component's first, middle and last member
            let sources = [0, members.len() / 2, members.len() - 1];
            for &i in &sources {
                let (_, far) = ecc(&self.bfs(members[i]));
                let (d, _) = ecc(&self.bfs(far));
                best = best.max(d);
            }
        }
        Ok(best)
    }
}

/// Graphs up to this many nodes get an exact all-sources diameter.
pub const EXACT_DIAMETER_LIMIT: usize = 1 << 14;

fn check_endpoints(u: NodeId, v: NodeId, n: usize) -> Result<(), GraphError> {
    if u as usize >= n || v as usize >= n {
        return Err(GraphError::NodeOutOfRange(u as u64, v as u64, n));
    }
    if u == v {
        return Err(GraphError::SelfLoop(u as u64));
    }
    Ok(())
}

/// A seeded permutation of node ids: `permutation[old] == new`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    pub permutation: Vec<NodeId>,
    pub seed: u64,
}

impl Relabeling {
    pub fn apply(&self, v: NodeId) -> NodeId {
        self.permutation[v as usize]
    }

    pub fn inverse(&self) -> Vec<NodeId> {
        let mut inv = vec![0; self.permutation.len()];
        for (old, &new) in self.permutation.iter().enumerate() {
            inv[new as usize] = old as NodeId;
        }
        inv
    }

    pub fn is_bijection(&self) -> bool {
        let n = self.permutation.len();
        let mut hit = vec![false; n];
        self.permutation.iter().all(|&p| {
            let p = p as usize;
            p < n && !std::mem::replace(&mut hit[p], true)
        })
    }
}
