//! Graph sources named on the command line.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use ccmr::graph::{complete_binary_tree, load_edge_list, path, random, relabel_random, star};
use ccmr::Graph;

/// Largest generated graph.
pub const MAX_NODES: usize = 1 << 19;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Path(usize),
    Tree(usize),
    /// Number of leaves; the graph has one more node.
    Star(usize),
    /// Node count and edge probability. Always weighted.
    Random(usize, f64),
    File(PathBuf),
}

/// `path:N`, `tree:N`, `star:L`, `random:N:P` or `file:PATH`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSpec {
    pub family: Family,
    text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Ordering {
    Identity,
    Random,
}

fn count(s: &str, what: &str) -> Result<usize> {
    let n: usize = s
        .parse()
        .with_context(|| format!("{what} `{s}` is not a non-negative integer"))?;
    if n > MAX_NODES {
        bail!("{what} {n} exceeds the cap of {MAX_NODES}");
    }
    Ok(n)
}

impl FromStr for GraphSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .with_context(|| format!("graph `{s}` has no `family:` prefix"))?;
        let family = match kind {
            "path" => Family::Path(count(rest, "node count")?),
            "tree" => Family::Tree(count(rest, "node count")?),
            "star" => match count(rest, "leaf count")? {
                l if l < MAX_NODES => Family::Star(l),
                l => bail!("star with {l} leaves exceeds the cap of {MAX_NODES} nodes"),
            },
            "random" => {
                let (n, p) = rest
                    .split_once(':')
                    .with_context(|| format!("graph `{s}` needs random:N:P"))?;
                let p: f64 = p
                    .parse()
                    .with_context(|| format!("edge probability `{p}` is not a number"))?;
                if !(0.0..=1.0).contains(&p) {
                    bail!("edge probability {p} outside [0, 1]");
                }
                Family::Random(count(n, "node count")?, p)
            }
            "file" if !rest.is_empty() => Family::File(PathBuf::from(rest)),
            _ => bail!("unknown graph `{s}`; expected path:N, tree:N, star:L, random:N:P or file:PATH"),
        };
        if let Family::Path(0) | Family::Tree(0) | Family::Random(0, _) = family {
            bail!("graph `{s}` needs at least one node");
        }
        Ok(GraphSpec {
            family,
            text: s.to_string(),
        })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl GraphSpec {
    /// Builds the graph for `seed`. Only random graphs depend on the seed.
    pub fn build(&self, seed: u64, weighted: bool) -> Result<Graph> {
        let g = match &self.family {
            Family::Path(n) => path(*n)?,
            Family::Tree(n) => complete_binary_tree(*n)?,
            Family::Star(l) => star(*l)?,
            Family::Random(n, p) => random(*n, *p, seed, true)?,
            Family::File(p) => {
                let f = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
                load_edge_list(BufReader::new(f), weighted).with_context(|| format!("reading {}", p.display()))?
            }
        };
        if weighted && !g.is_weighted() {
            bail!("graph `{self}` has no edge weights");
        }
        Ok(g)
    }

    pub fn is_seeded(&self) -> bool {
        matches!(self.family, Family::Random(..))
    }

    /// One graph per seed, relabelled with that seed when `ordering` is
    /// random. Seed-independent sources are built once.
    pub fn instances(&self, seeds: &[u64], ordering: Ordering, weighted: bool) -> Result<Vec<(u64, Graph)>> {
        let fixed = if self.is_seeded() {
            None
        } else {
            Some(self.build(0, weighted)?)
        };
        seeds
            .iter()
            .map(|&seed| {
                let g = match &fixed {
                    Some(g) => g.clone(),
                    None => self.build(seed, weighted)?,
                };
                Ok(match ordering {
                    Ordering::Identity => (seed, g),
                    Ordering::Random => (seed, relabel_random(&g, seed).0),
                })
            })
            .collect()
    }
}
