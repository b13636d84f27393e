//! JSON form of a run.

use serde::Serialize;

use crate::engine::{RoundMetrics, RunResult};
use crate::nodeset::NodeSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub algo: String,
    pub seed: Option<u64>,
    pub rounds: usize,
    pub converged: bool,
    pub per_round: Vec<RoundMetrics>,
    pub components: Vec<NodeSet>,
}

impl RunReport {
    pub fn new(algo: impl Into<String>, seed: Option<u64>, result: &RunResult) -> Self {
        RunReport {
            algo: algo.into(),
            seed,
            rounds: result.rounds,
            converged: result.converged,
            per_round: result.per_round.clone(),
            components: result.components.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report fields always serialize")
    }
}
