//! The `gen`, `run`, `sweep` and `slc` commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{bail, Context, Result};
use ccmr::graph::{relabel_random, write_edge_list};
use ccmr::oracle::{centralized_slc, union_find_components};
use ccmr::slc::{run_slc, SlcScheme};
use ccmr::{Algorithm, Graph, NodeSet, RoundMetrics, StopPredicate};
use serde::Serialize;

use crate::output::{emit, join, Format};
use crate::source::{Family, GraphSpec, Ordering, MAX_NODES};

/// Oracle checks are skipped above this many nodes.
pub const VERIFY_MAX_NODES: usize = 10_000;

/// How a command finished.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Ok,
    NotConverged,
    Mismatch,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::NotConverged => 2,
            Outcome::Mismatch => 3,
        }
    }
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn verifiable(spec: &GraphSpec, seed: u64, g: &Graph) -> bool {
    if g.node_count() > VERIFY_MAX_NODES {
        eprintln!(
            "warning: {spec} seed {seed}: {} nodes exceed {VERIFY_MAX_NODES}, oracle check skipped",
            g.node_count()
        );
        return false;
    }
    true
}

pub fn gen(spec: &GraphSpec, seed: u64, ordering: Ordering, output: Option<&str>) -> Result<Outcome> {
    let g = match &spec.family {
        Family::File(_) => spec.build(seed, true).or_else(|_| spec.build(seed, false))?,
        _ => spec.build(seed, false)?,
    };
    let g = match ordering {
        Ordering::Identity => g,
        Ordering::Random => relabel_random(&g, seed).0,
    };
    match output {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("cannot create {path}"))?;
            let mut w = BufWriter::new(f);
            write_edge_list(&g, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = stdout();
            write_edge_list(&g, &mut w)?;
            w.flush()?;
        }
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct RunRow {
    graph: String,
    nodes: usize,
    edges: usize,
    algo: String,
    seed: u64,
    ordering: &'static str,
    rounds: usize,
    phase1_rounds: Option<usize>,
    converged: bool,
    components: usize,
    max_total_state: u64,
    max_reducer_in: u64,
    total_node_id_volume: u64,
    node_id_volume: String,
    verified: &'static str,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    #[serde(flatten)]
    row: &'a RunRow,
    per_round: Vec<RoundMetrics>,
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Identity => "identity",
        Ordering::Random => "random",
    }
}

pub struct RunArgs<'a> {
    pub spec: &'a GraphSpec,
    pub algo: Algorithm,
    pub seeds: &'a [u64],
    pub ordering: Ordering,
    pub max_rounds: usize,
    pub verify: bool,
    pub format: Format,
}

pub fn run(a: &RunArgs<'_>) -> Result<Outcome> {
    let mut outcome = Outcome::Ok;
    let mut rows = Vec::new();
    let mut per_round = Vec::new();
    for (seed, g) in a.spec.instances(a.seeds, a.ordering, false)? {
        let r = a.algo.run(&g, a.max_rounds)?;
        let verified = if !a.verify {
            "off"
        } else if !r.converged || !verifiable(a.spec, seed, &g) {
            "skipped"
        } else if r.components == union_find_components(&g) {
            "pass"
        } else {
            eprintln!(
                "verify mismatch: {} seed {seed}: components differ from union-find",
                a.spec
            );
            outcome = outcome.max(Outcome::Mismatch);
            "fail"
        };
        if !r.converged {
            outcome = outcome.max(Outcome::NotConverged);
        }
        rows.push(RunRow {
            graph: a.spec.to_string(),
            nodes: g.node_count(),
            edges: g.edge_count(),
            algo: a.algo.to_string(),
            seed,
            ordering: ordering_name(a.ordering),
            rounds: r.rounds,
            phase1_rounds: r.phase1_rounds,
            converged: r.converged,
            components: r.components.len(),
            max_total_state: r.max_total_state(),
            max_reducer_in: r.max_reducer_in(),
            total_node_id_volume: r.per_round.iter().map(|m| m.node_id_volume).sum(),
            node_id_volume: join(r.per_round.iter().map(|m| m.node_id_volume)),
            verified,
        });
        per_round.push(r.per_round);
    }
    let records: Vec<RunRecord<'_>> = rows
        .iter()
        .zip(per_round)
        .map(|(row, per_round)| RunRecord { row, per_round })
        .collect();
    emit(a.format, &rows, &records, stdout())?;
    Ok(outcome)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepFamily {
    Path,
    Tree,
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    d: usize,
    log2_d: u32,
    rounds_worst: usize,
    bound_2log2d: u32,
    max_state_mean: f64,
    #[serde(rename = "bound_3VE")]
    bound_3ve: u64,
    seeds: String,
}

/// `⌈log2 d⌉`, taking `d = 0` and `d = 1` to 0.
pub fn ceil_log2(d: usize) -> u32 {
    if d <= 1 {
        0
    } else {
        usize::BITS - (d - 1).leading_zeros()
    }
}

/// Sizes are integers or `2^k`.
pub fn parse_size(s: &str) -> Result<usize> {
    let n = match s.split_once('^') {
        Some(("2", k)) => {
            let k: u32 = k.parse().with_context(|| format!("bad exponent in `{s}`"))?;
            1usize
                .checked_shl(k)
                .filter(|_| k < usize::BITS)
                .context("size overflows")?
        }
        Some(_) => bail!("only powers of two may use `^`: `{s}`"),
        None => s.parse().with_context(|| format!("size `{s}` is not an integer"))?,
    };
    if n == 0 || n > MAX_NODES {
        bail!("size {n} outside 1..={MAX_NODES}");
    }
    Ok(n)
}

pub struct SweepArgs<'a> {
    pub family: SweepFamily,
    pub sizes: &'a [usize],
    pub algo: Algorithm,
    pub seeds: &'a [u64],
    pub max_rounds: usize,
    pub format: Format,
}

pub fn sweep(a: &SweepArgs<'_>) -> Result<Outcome> {
    if a.sizes.is_empty() {
        bail!("at least one size is required");
    }
    if a.sizes.windows(2).any(|w| w[0] >= w[1]) {
        bail!("sizes must be strictly ascending");
    }
    let mut outcome = Outcome::Ok;
    let mut rows = Vec::new();
    for &n in a.sizes {
        let spec: GraphSpec = match a.family {
            SweepFamily::Path => format!("path:{n}"),
            SweepFamily::Tree => format!("tree:{n}"),
        }
        .parse()?;
        let base = spec.build(0, false)?;
        let d = base.diameter()?;
        let mut worst = 0;
        let mut state_sum = 0u64;
        for (_, g) in spec.instances(a.seeds, Ordering::Random, false)? {
            let r = a.algo.run(&g, a.max_rounds)?;
            if !r.converged {
                outcome = outcome.max(Outcome::NotConverged);
            }
            worst = worst.max(r.rounds);
            state_sum += r.max_total_state();
        }
        let lg = ceil_log2(d);
        rows.push(SweepRow {
            n,
            d,
            log2_d: lg,
            rounds_worst: worst,
            bound_2log2d: 2 * lg,
            max_state_mean: (state_sum as f64 / a.seeds.len() as f64 * 100.0).round() / 100.0,
            bound_3ve: 3 * (base.node_count() + base.edge_count()) as u64,
            seeds: join(a.seeds.iter()),
        });
    }
    emit(a.format, &rows, &rows, stdout())?;
    Ok(outcome)
}

#[derive(Serialize)]
struct SlcRow {
    graph: String,
    nodes: usize,
    edges: usize,
    scheme: &'static str,
    stop: String,
    seed: u64,
    rounds: usize,
    stopped: bool,
    complete: bool,
    clusters: usize,
    largest: usize,
    verified: &'static str,
}

#[derive(Serialize)]
struct SlcRecord<'a> {
    #[serde(flatten)]
    row: &'a SlcRow,
    clustering: Vec<NodeSet>,
}

pub struct SlcArgs<'a> {
    pub spec: &'a GraphSpec,
    pub schemes: &'a [SlcScheme],
    pub stop: StopPredicate,
    pub seeds: &'a [u64],
    pub ordering: Ordering,
    pub max_rounds: usize,
    pub verify: bool,
    pub format: Format,
}

fn diff_summary(got: &[NodeSet], want: &[NodeSet]) -> String {
    let extra: Vec<&NodeSet> = got.iter().filter(|c| !want.contains(c)).collect();
    let missing: Vec<&NodeSet> = want.iter().filter(|c| !got.contains(c)).collect();
    let show = |cs: &[&NodeSet]| cs.first().map(|c| format!(" (first: {c:?})")).unwrap_or_default();
    format!(
        "{} clusters not in the oracle{}, {} oracle clusters missing{}",
        extra.len(),
        show(&extra),
        missing.len(),
        show(&missing)
    )
}

pub fn slc(a: &SlcArgs<'_>) -> Result<Outcome> {
    let mut outcome = Outcome::Ok;
    let mut rows = Vec::new();
    let mut clusterings = Vec::new();
    for (seed, g) in a.spec.instances(a.seeds, a.ordering, true)? {
        let oracle = if a.verify && verifiable(a.spec, seed, &g) {
            Some(centralized_slc(&g, &a.stop)?)
        } else {
            None
        };
        for &scheme in a.schemes {
            let r = run_slc(&g, scheme, &a.stop, a.max_rounds)?;
            if !r.complete {
                outcome = outcome.max(Outcome::NotConverged);
            }
            let verified = match &oracle {
                None if a.verify => "skipped",
                None => "off",
                Some(want) if r.clustering.clusters() == want.as_slice() => "pass",
                Some(want) => {
                    eprintln!(
                        "verify mismatch: {} seed {seed} {scheme}: {}",
                        a.spec,
                        diff_summary(r.clustering.clusters(), want)
                    );
                    outcome = outcome.max(Outcome::Mismatch);
                    "fail"
                }
            };
            rows.push(SlcRow {
                graph: a.spec.to_string(),
                nodes: g.node_count(),
                edges: g.edge_count(),
                scheme: scheme.selector(),
                stop: a.stop.to_string(),
                seed,
                rounds: r.rounds,
                stopped: r.stopped,
                complete: r.complete,
                clusters: r.clustering.len(),
                largest: r.clustering.largest(),
                verified,
            });
            clusterings.push(r.clustering.into_clusters());
        }
    }
    let records: Vec<SlcRecord<'_>> = rows
        .iter()
        .zip(clusterings)
        .map(|(row, clustering)| SlcRecord { row, clustering })
        .collect();
    emit(a.format, &rows, &records, stdout())?;
    Ok(outcome)
}
