//! Seeded graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, Relabeling};
use crate::error::GraphError;
use crate::NodeId;

fn check_size(n: usize) -> Result<(), GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidArgument("node count must be at least 1".into()));
    }
    if n > NodeId::MAX as usize {
        return Err(GraphError::InvalidArgument(format!("{n} nodes exceed the id space")));
    }
    Ok(())
}

/// Path `0 - 1 - ... - n-1`.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    check_size(n)?;
    Graph::from_edges(n, (1..n as NodeId).map(|i| (i - 1, i)))
}

/// Heap-ordered complete binary tree: node `i` has children `2i+1`, `2i+2`.
pub fn complete_binary_tree(n: usize) -> Result<Graph, GraphError> {
    check_size(n)?;
    Graph::from_edges(n, (1..n as NodeId).map(|i| ((i - 1) / 2, i)))
}

/// Star with centre `0` and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Result<Graph, GraphError> {
    check_size(leaves + 1)?;
    Graph::from_edges(leaves + 1, (1..=leaves as NodeId).map(|i| (0, i)))
}

/// Erdős–Rényi graph: every pair is an edge independently with probability
/// `p`. Uses geometric skipping, so the cost is linear in the output size.
///
/// Weighted graphs draw one weight per edge in lexicographic edge order;
/// a collision is bumped to the next representable float until unique.
pub fn random(n: usize, p: f64, seed: u64, weighted: bool) -> Result<Graph, GraphError> {
    check_size(n)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidArgument(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    if p >= 1.0 {
        for v in 1..n as NodeId {
            edges.extend((0..v).map(|u| (u, v)));
        }
    } else if p > 0.0 {
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = 1.0 - rng.gen::<f64>();
            w += 1 + (r.ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as NodeId, v as NodeId));
            }
        }
    }
    edges.sort_unstable();
    if !weighted {
        return Graph::from_edges(n, edges);
    }
    let mut used = HashSet::with_capacity(edges.len());
    let weighted_edges: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| {
            let mut w = 1.0 - rng.gen::<f64>();
            while !used.insert(w.to_bits()) {
                w = if w < 1.0 { w.next_up() } else { w.next_down() };
            }
            (u, v, w)
        })
        .collect();
    Graph::from_weighted_edges(n, weighted_edges)
}

/// Applies a uniformly random permutation of the ids, drawn from `seed`.
pub fn relabel_random(g: &Graph, seed: u64) -> (Graph, Relabeling) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut permutation: Vec<NodeId> = g.nodes().collect();
    permutation.shuffle(&mut rng);
    let h = g.relabel(&permutation);
    (h, Relabeling { permutation, seed })
}
