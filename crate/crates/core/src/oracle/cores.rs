//! Cores checked straight from the definition, and a clustering oracle that
//! merges mutually nearest clusters in a random order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DisjointSet;
use crate::error::SlcError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::slc::StopPredicate;
use crate::NodeId;

/// Kruskal over the subgraph induced by `c`; `None` if it is disconnected.
fn induced_mst(g: &Graph, c: &NodeSet) -> Option<Vec<(f64, NodeId, NodeId)>> {
    let mut edges: Vec<(f64, NodeId, NodeId)> = g
        .weighted_edges()
        .filter(|&(u, v, _)| c.contains(u) && c.contains(v))
        .map(|(u, v, w)| (w, u, v))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut ds = DisjointSet::new(g.node_count());
    let tree: Vec<_> = edges
        .into_iter()
        .filter(|&(_, u, v)| ds.union(u as usize, v as usize).is_some())
        .collect();
    (tree.len() + 1 == c.len()).then_some(tree)
}

/// The two sides of the induced spanning tree without its heaviest edge.
fn halves(g: &Graph, c: &NodeSet) -> Option<(NodeSet, NodeSet)> {
    let mut tree = induced_mst(g, c)?;
    let (_, a, _) = tree.pop()?;
    let mut ds = DisjointSet::new(g.node_count());
    for (_, u, v) in tree {
        ds.union(u as usize, v as usize);
    }
    let ra = ds.find(a as usize);
    let (l, r): (Vec<NodeId>, Vec<NodeId>) = c.iter().partition(|&x| ds.find(x as usize) == ra);
    Some((NodeSet::from_unsorted(l), NodeSet::from_unsorted(r)))
}

/// Lightest edge from `c` to a node outside it, as (inside, outside, w).
fn lightest_exit(g: &Graph, c: &NodeSet) -> Option<(NodeId, NodeId, f64)> {
    c.iter()
        .flat_map(|u| g.neighbors(u).iter().map(move |&v| (u, v)))
        .filter(|&(_, v)| !c.contains(v))
        .map(|(u, v)| (u, v, g.weight(u, v).expect("weighted")))
        .min_by(|a, b| a.2.total_cmp(&b.2))
}

/// A singleton is a core; a larger connected cluster is one when both
/// halves are cores and each half's lightest exit lands in the other.
pub fn core_by_definition(g: &Graph, c: &NodeSet) -> Result<bool, SlcError> {
    if !g.is_weighted() {
        return Err(SlcError::Unweighted);
    }
    if c.len() <= 1 {
        return if c.is_empty() {
            Err(SlcError::EmptyCluster)
        } else {
            Ok(true)
        };
    }
    let (l, r) = halves(g, c).ok_or(SlcError::Disconnected)?;
    let lands = |from: &NodeSet, to: &NodeSet| lightest_exit(g, from).is_some_and(|(_, v, _)| to.contains(v));
    Ok(lands(&l, &r) && lands(&r, &l) && core_by_definition(g, &l)? && core_by_definition(g, &r)?)
}

/// Every nonempty subset of `c` whose induced subgraph is connected.
/// Exponential; meant for clusters of at most about 16 nodes.
pub fn connected_subsets(g: &Graph, c: &NodeSet) -> Vec<NodeSet> {
    let ids = c.to_vec();
    assert!(ids.len() < 24, "too many subsets");
    let mut out = Vec::new();
    for mask in 1u32..(1 << ids.len()) {
        let s: NodeSet = (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
        if s.len() == 1 || induced_mst(g, &s).is_some() {
            out.push(s);
        }
    }
    out
}

/// All cores inside `c`, by enumeration.
pub fn cores_within(g: &Graph, c: &NodeSet) -> Result<Vec<NodeSet>, SlcError> {
    let mut out = Vec::new();
    for s in connected_subsets(g, c) {
        if core_by_definition(g, &s)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Clustering by repeated merges of mutually nearest clusters, taken in an
/// order shuffled by `seed`. A cluster becomes final when a merge it
/// takes part in is stopped or when its nearest cluster is final.
pub fn nearest_merge_slc(g: &Graph, p: &StopPredicate, seed: u64) -> Result<Vec<NodeSet>, SlcError> {
    if !g.is_weighted() {
        return Err(SlcError::Unweighted);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clusters: Vec<NodeSet> = g.nodes().map(NodeSet::singleton).collect();
    let mut heaviest: Vec<f64> = vec![0.0; clusters.len()];
    let mut frozen = vec![false; clusters.len()];
    loop {
        let owner = |v: NodeId, cs: &[NodeSet]| cs.iter().position(|c| c.contains(v)).expect("covered");
        let nearest: Vec<Option<(usize, f64)>> = clusters
            .iter()
            .map(|c| lightest_exit(g, c).map(|(_, v, w)| (owner(v, &clusters), w)))
            .collect();
        let mut moves: Vec<usize> = (0..clusters.len())
            .filter(|&a| !frozen[a])
            .filter(|&a| match nearest[a] {
                Some((b, _)) => frozen[b] || nearest[b].is_some_and(|(x, _)| x == a),
                None => false,
            })
            .collect();
        if moves.is_empty() {
            break;
        }
        moves.shuffle(&mut rng);
        let a = moves[0];
        let (b, w) = nearest[a].expect("has a nearest cluster");
        let size = clusters[a].len() + clusters[b].len();
        let stopped = match *p {
            StopPredicate::Distance(theta) => w.max(heaviest[a]).max(heaviest[b]) > theta,
            StopPredicate::Size(s) => size > s,
            StopPredicate::Never => false,
        };
        if frozen[b] || stopped {
            frozen[a] = true;
            frozen[b] = true;
            continue;
        }
        let (keep, gone) = (a.min(b), a.max(b));
        clusters[keep] = clusters[a].union(&clusters[b]);
        heaviest[keep] = w.max(heaviest[a]).max(heaviest[b]);
        clusters.swap_remove(gone);
        heaviest.swap_remove(gone);
        frozen.swap_remove(gone);
    }
    clusters.sort_by_key(NodeSet::min);
    Ok(clusters)
}
