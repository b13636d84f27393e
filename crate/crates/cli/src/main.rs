//! `ccmr`: runs the connected-components and clustering schemes on
//! generated or loaded graphs and prints one CSV or JSON row per run.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a run hit
//! `--max-rounds` before converging, 3 an oracle check failed.

mod commands;
mod output;
mod source;

use std::process::ExitCode;

use anyhow::{bail, Result};
use ccmr::slc::SlcScheme;
use ccmr::{Algorithm, StopPredicate};
use clap::{Args, Parser, Subcommand};

use commands::{Outcome, RunArgs, SlcArgs, SweepArgs, SweepFamily};
use output::Format;
use source::{GraphSpec, Ordering};

#[derive(Parser, Debug)]
#[command(
    name = "ccmr",
    version,
    about = "Map-reduce connected components and single-linkage clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a graph as an edge list
    Gen {
        /// path:N, tree:N, star:L, random:N:P or file:PATH
        #[arg(long)]
        graph: GraphSpec,
        /// Seed for random graphs and random orderings
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Ordering::Identity)]
        ordering: Ordering,
        /// Output file (stdout if absent)
        #[arg(long)]
        output: Option<String>,
    },
    /// Run one components scheme once per seed
    Run {
        #[arg(long)]
        graph: GraphSpec,
        /// hash-min, hash-to-all, hash-to-min, hgtm-alt or hash-to-min-lb
        #[arg(long, default_value = "hash-to-min")]
        algo: String,
        /// Load threshold for hash-to-min-lb (unbounded if absent)
        #[arg(long)]
        tau: Option<usize>,
        #[command(flatten)]
        seeds: SeedArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Compare every partition with union-find
        #[arg(long)]
        verify: bool,
    },
    /// Worst rounds and mean peak state per size over random orderings
    Sweep {
        #[arg(long, value_enum)]
        family: SweepFamily,
        /// Ascending sizes, integers or 2^k
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_size)]
        sizes: Vec<usize>,
        #[arg(long, default_value = "hash-to-min")]
        algo: String,
        #[arg(long)]
        tau: Option<usize>,
        /// Seeds 0..N per size
        #[arg(long, default_value_t = 10, conflicts_with = "seed_list")]
        seeds: u64,
        #[arg(long, value_delimiter = ',')]
        seed_list: Option<Vec<u64>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Single-linkage clustering with both components schemes
    Slc {
        /// A weighted graph: random:N:P or file:PATH with weights
        #[arg(long)]
        graph: GraphSpec,
        /// dist:THETA, size:S or never
        #[arg(long)]
        stop: StopPredicate,
        /// Restrict to hash-to-all or hash-to-min
        #[arg(long)]
        algo: Option<SlcScheme>,
        #[command(flatten)]
        seeds: SeedArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Compare every clustering with the centralized oracle
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Args, Debug)]
struct SeedArgs {
    /// Run seeds 0..N
    #[arg(long, conflicts_with = "seed_list")]
    seeds: Option<u64>,
    /// Run these seeds
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    /// Node labelling; random when seeds are given, identity otherwise
    #[arg(long, value_enum)]
    ordering: Option<Ordering>,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_rounds: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn parse_size(s: &str) -> Result<usize, String> {
    commands::parse_size(s).map_err(|e| e.to_string())
}

/// Sorted, deduplicated seeds; at least one.
fn seed_list(count: Option<u64>, list: Option<Vec<u64>>) -> Result<Vec<u64>> {
    let mut seeds = match (count, list) {
        (_, Some(list)) => list,
        (Some(n), None) => (0..n).collect(),
        (None, None) => vec![0],
    };
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.is_empty() {
        bail!("at least one seed is required");
    }
    Ok(seeds)
}

impl SeedArgs {
    fn resolve(self) -> Result<(Vec<u64>, Ordering)> {
        let given = self.seeds.is_some() || self.seed_list.is_some();
        let ordering = self
            .ordering
            .unwrap_or(if given { Ordering::Random } else { Ordering::Identity });
        Ok((seed_list(self.seeds, self.seed_list)?, ordering))
    }
}

fn algorithm(name: &str, tau: Option<usize>) -> Result<Algorithm> {
    let algo = Algorithm::parse(name, tau)?;
    if tau.is_some() && !matches!(algo, Algorithm::HashToMinLb(_)) {
        bail!("--tau applies only to hash-to-min-lb");
    }
    Ok(algo)
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Gen {
            graph,
            seed,
            ordering,
            output,
        } => commands::gen(&graph, seed, ordering, output.as_deref()),
        Command::Run {
            graph,
            algo,
            tau,
            seeds,
            common,
            verify,
        } => {
            let algo = algorithm(&algo, tau)?;
            let (seeds, ordering) = seeds.resolve()?;
            commands::run(&RunArgs {
                spec: &graph,
                algo,
                seeds: &seeds,
                ordering,
                max_rounds: common.max_rounds as usize,
                verify,
                format: common.format,
            })
        }
        Command::Sweep {
            family,
            sizes,
            algo,
            tau,
            seeds,
            seed_list: list,
            common,
        } => {
            let algo = algorithm(&algo, tau)?;
            let seeds = seed_list(Some(seeds), list)?;
            commands::sweep(&SweepArgs {
                family,
                sizes: &sizes,
                algo,
                seeds: &seeds,
                max_rounds: common.max_rounds as usize,
                format: common.format,
            })
        }
        Command::Slc {
            graph,
            stop,
            algo,
            seeds,
            common,
            verify,
        } => {
            let schemes = match algo {
                Some(s) => vec![s],
                None => vec![SlcScheme::HashToAll, SlcScheme::HashToMin],
            };
            let (seeds, ordering) = seeds.resolve()?;
            commands::slc(&SlcArgs {
                spec: &graph,
                schemes: &schemes,
                stop,
                seeds: &seeds,
                ordering,
                max_rounds: common.max_rounds as usize,
                verify,
                format: common.format,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
