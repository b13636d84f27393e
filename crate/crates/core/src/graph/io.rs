//! Whitespace-separated edge lists: `u v` or `u v w` per line, `#` comments.
//!
//! A line holding a single id declares an isolated node. Ids are compacted
//! to `0..k` in increasing order of the original id.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use super::Graph;
use crate::error::GraphError;
use crate::NodeId;

type RawEdge = (u64, u64, Option<f64>);

/// Reads an edge list. In weighted mode every edge needs a weight; in
/// unweighted mode any weight column is ignored.
pub fn load_edge_list<R: BufRead>(reader: R, weighted: bool) -> Result<Graph, GraphError> {
    let mut nodes = BTreeSet::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        parse_line(&line, i + 1, weighted, &mut nodes, &mut edges)?;
    }
    build(nodes, edges, weighted)
}

/// Parses an in-memory edge list.
pub fn parse_edge_list(text: &str, weighted: bool) -> Result<Graph, GraphError> {
    load_edge_list(text.as_bytes(), weighted)
}

fn parse_line(
    line: &str,
    lineno: usize,
    weighted: bool,
    nodes: &mut BTreeSet<u64>,
    edges: &mut Vec<RawEdge>,
) -> Result<(), GraphError> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(());
    }
    let err = |msg: String| GraphError::Parse { line: lineno, msg };
    let fields: Vec<&str> = body.split_whitespace().collect();
    let id = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| err(format!("`{s}` is not a non-negative integer id")))
    };
    match fields.as_slice() {
        [u] => {
            nodes.insert(id(u)?);
        }
        [u, v] if weighted => {
            return Err(err(format!("edge ({u}, {v}) has no weight")));
        }
        [u, v] | [u, v, _] if !weighted => {
            let (u, v) = (id(u)?, id(v)?);
            push_edge(u, v, None, nodes, edges)?;
        }
        [u, v, w] => {
            let (u, v) = (id(u)?, id(v)?);
            let w: f64 = w.parse().map_err(|_| err(format!("`{w}` is not a decimal weight")))?;
            if !(w > 0.0 && w <= 1.0) {
                return Err(GraphError::WeightOutOfRange(w));
            }
            push_edge(u, v, Some(w), nodes, edges)?;
        }
        _ => return Err(err(format!("expected `u v [w]`, got {} fields", fields.len()))),
    }
    Ok(())
}

fn push_edge(
    u: u64,
    v: u64,
    w: Option<f64>,
    nodes: &mut BTreeSet<u64>,
    edges: &mut Vec<RawEdge>,
) -> Result<(), GraphError> {
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    nodes.insert(u);
    nodes.insert(v);
    edges.push((u, v, w));
    Ok(())
}

fn build(nodes: BTreeSet<u64>, edges: Vec<RawEdge>, weighted: bool) -> Result<Graph, GraphError> {
    let labels: Vec<u64> = nodes.into_iter().collect();
    if labels.len() > NodeId::MAX as usize {
        return Err(GraphError::InvalidArgument("too many distinct node ids".into()));
    }
    let compact = |x: u64| labels.binary_search(&x).expect("id was recorded") as NodeId;
    let n = labels.len();
    let g = if weighted {
        // the same edge listed twice with one weight is still a duplicate weight
        Graph::from_weighted_edges(
            n,
            edges
                .iter()
                .map(|&(u, v, w)| (compact(u), compact(v), w.unwrap_or(f64::NAN))),
        )
    } else {
        Graph::from_edges(n, edges.iter().map(|&(u, v, _)| (compact(u), compact(v))))
    };
    let g = g.map_err(|e| match e {
        GraphError::DuplicateEdge(a, b) => GraphError::DuplicateEdge(labels[a as usize], labels[b as usize]),
        other => other,
    })?;
    Ok(g.with_labels(labels))
}

/// Writes `u v [w]` lines using original ids. Weights use the shortest
/// decimal that parses back to the same value.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for v in g.nodes().filter(|&v| g.degree(v) == 0) {
        writeln!(out, "{}", g.original_id(v))?;
    }
    for (u, v) in g.edges() {
        let (a, b) = (g.original_id(u), g.original_id(v));
        match g.weight(u, v) {
            Some(w) => writeln!(out, "{a} {b} {w}")?,
            None => writeln!(out, "{a} {b}")?,
        }
    }
    Ok(())
}
