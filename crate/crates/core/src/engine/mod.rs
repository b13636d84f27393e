//! The general round loop: map every cluster to keyed messages, shuffle,
//! reduce per key, and repeat until no cluster changes.

mod merge;
mod shuffle;

use serde::Serialize;

pub use merge::{merge_runs, merge_sorted_dedup};
pub use shuffle::{Emitter, Incoming, PayloadRef, SetRef, ShuffleMode};

use crate::error::EngineError;
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::NodeId;

/// How a scheme seeds `C_v` before the first round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitMode {
    /// `C_v = {v}`
    Singleton,
    /// `C_v = {v} ∪ nbrs(v)`
    ClosedNeighborhood,
}

/// The cluster `C_v` held at every reducer after some number of rounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterState {
    clusters: Vec<NodeSet>,
    round: usize,
}

impl ClusterState {
    pub fn new(clusters: Vec<NodeSet>) -> Self {
        ClusterState { clusters, round: 0 }
    }

    pub fn initial(g: &Graph, mode: InitMode) -> Self {
        let clusters = g
            .nodes()
            .map(|v| match mode {
                InitMode::Singleton => NodeSet::singleton(v),
                InitMode::ClosedNeighborhood => {
                    let mut c = NodeSet::from_sorted(g.neighbors(v).iter().copied()).expect("adjacency is sorted");
                    c.insert(v);
                    c
                }
            })
            .collect();
        ClusterState::new(clusters)
    }

    /// Builds a state from plain id lists, each of which must be strictly
    /// increasing.
    pub fn from_lists<S: AsRef<[NodeId]>>(lists: &[S]) -> Result<Self, EngineError> {
        lists
            .iter()
            .enumerate()
            .map(|(index, l)| NodeSet::from_sorted(l.as_ref().iter().copied()).ok_or(EngineError::Unsorted { index }))
            .collect::<Result<Vec<_>, _>>()
            .map(ClusterState::new)
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn node_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[NodeSet] {
        &self.clusters
    }

    pub fn cluster(&self, v: NodeId) -> &NodeSet {
        &self.clusters[v as usize]
    }

    /// `Σ |C_v|`
    pub fn total_size(&self) -> u64 {
        self.clusters.iter().map(|c| c.len() as u64).sum()
    }

    pub fn to_lists(&self) -> Vec<Vec<NodeId>> {
        self.clusters.iter().map(NodeSet::to_vec).collect()
    }

    pub fn into_clusters(self) -> Vec<NodeSet> {
        self.clusters
    }
}

/// Mapper, merger and export function defining one algorithm.
///
/// Rounds are numbered from 1. A reducer that receives no message still
/// runs `reduce` with an empty [`Incoming`].
pub trait HashScheme {
    fn name(&self) -> &str;

    fn init_mode(&self) -> InitMode;

    fn initial_state(&self, g: &Graph) -> ClusterState {
        ClusterState::initial(g, self.init_mode())
    }

    /// Convergence is only tested at rounds that are multiples of the
    /// period, against the state one period earlier.
    fn period(&self) -> usize {
        1
    }

    fn map<'a>(&self, round: usize, v: NodeId, c: &'a NodeSet, g: &'a Graph, out: &mut Emitter<'a>);

    fn reduce(&self, round: usize, v: NodeId, incoming: &Incoming<'_>, prev: &NodeSet) -> NodeSet;

    /// Turns a converged state into the list of components.
    fn export(&self, state: &ClusterState) -> Vec<NodeSet>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundMetrics {
    pub round: usize,
    pub messages: u64,
    /// Σ of payload lengths over all emitted messages.
    pub node_id_volume: u64,
    /// Largest total payload length delivered to a single key.
    pub max_reducer_in: u64,
    /// Σ |C_v| after the reduce phase.
    pub total_state: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub final_state: ClusterState,
    /// Exported components; empty unless the run converged.
    pub components: Vec<NodeSet>,
    pub per_round: Vec<RoundMetrics>,
    pub rounds: usize,
    pub converged: bool,
    /// Rounds spent in the first phase of a two-phase driver.
    pub phase1_rounds: Option<usize>,
}

impl RunResult {
    pub fn max_total_state(&self) -> u64 {
        self.per_round.iter().map(|m| m.total_state).max().unwrap_or(0)
    }

    pub fn max_reducer_in(&self) -> u64 {
        self.per_round.iter().map(|m| m.max_reducer_in).max().unwrap_or(0)
    }
}

/// Steps one scheme over one graph.
pub struct Engine<'g, S: ?Sized> {
    graph: &'g Graph,
    scheme: &'g S,
    state: ClusterState,
    checkpoint: Option<ClusterState>,
    converged: bool,
    shuffle: ShuffleMode,
}

impl<'g, S: HashScheme + ?Sized> Engine<'g, S> {
    pub fn new(graph: &'g Graph, scheme: &'g S) -> Self {
        let state = scheme.initial_state(graph);
        Self::start(graph, scheme, state)
    }

    /// Starts from an explicit state instead of the scheme's initialisation.
    pub fn from_state(graph: &'g Graph, scheme: &'g S, state: ClusterState) -> Result<Self, EngineError> {
        if state.node_count() != graph.node_count() {
            return Err(EngineError::StateSize {
                got: state.node_count(),
                expected: graph.node_count(),
            });
        }
        let n = graph.node_count();
        if let Some(id) = state
            .clusters
            .iter()
            .filter_map(NodeSet::max)
            .find(|&m| m as usize >= n)
        {
            return Err(EngineError::PayloadOutOfRange { id, node_count: n });
        }
        Ok(Self::start(graph, scheme, state))
    }

    fn start(graph: &'g Graph, scheme: &'g S, state: ClusterState) -> Self {
        let checkpoint = (scheme.period() > 1).then(|| state.clone());
        Engine {
            graph,
            scheme,
            state,
            checkpoint,
            converged: false,
            shuffle: ShuffleMode::Auto,
        }
    }

    pub fn with_shuffle(mut self, mode: ShuffleMode) -> Self {
        self.shuffle = mode;
        self
    }

    pub fn state(&self) -> &ClusterState {
        &self.state
    }

    pub fn into_state(self) -> ClusterState {
        self.state
    }

    pub fn round(&self) -> usize {
        self.state.round
    }

    /// Whether the last executed round confirmed a fixpoint.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Executes one map-shuffle-reduce round.
    pub fn step(&mut self) -> Result<RoundMetrics, EngineError> {
        let round = self.state.round + 1;
        let n = self.graph.node_count();
        let (scheme, graph) = (self.scheme, self.graph);
        let old = &self.state.clusters;

        let mut em = Emitter::new(n);
        for (v, c) in old.iter().enumerate() {
            scheme.map(round, v as NodeId, c, graph, &mut em);
        }
        if let Some(e) = em.take_fault() {
            return Err(e);
        }
        let mut next = Vec::with_capacity(n);
        let traffic = shuffle::deliver(em, self.shuffle, |key, incoming| {
            next.push(scheme.reduce(round, key, incoming, &old[key as usize]));
        });
        let next = ClusterState { clusters: next, round };
        let period = scheme.period().max(1);
        self.converged = if !round.is_multiple_of(period) {
            false
        } else if let Some(cp) = self.checkpoint.as_mut() {
            let same = cp.clusters == next.clusters;
            *cp = next.clone();
            same
        } else {
            self.state.clusters == next.clusters
        };
        let metrics = RoundMetrics {
            round,
            messages: traffic.messages,
            node_id_volume: traffic.node_id_volume,
            max_reducer_in: traffic.max_reducer_in,
            total_state: next.total_size(),
        };
        self.state = next;
        Ok(metrics)
    }

    /// Steps until a fixpoint or `max_rounds`, optionally keeping every
    /// intermediate state (`snapshots[0]` is the starting state).
    pub fn run_recorded(
        mut self,
        max_rounds: usize,
        record: bool,
    ) -> Result<(RunResult, Vec<ClusterState>), EngineError> {
        if max_rounds == 0 {
            return Err(EngineError::ZeroRounds);
        }
        let mut snapshots = Vec::new();
        if record {
            snapshots.push(self.state.clone());
        }
        let mut per_round = Vec::new();
        while !self.converged && per_round.len() < max_rounds {
            per_round.push(self.step()?);
            if record {
                snapshots.push(self.state.clone());
            }
        }
        let components = if self.converged {
            self.scheme.export(&self.state)
        } else {
            Vec::new()
        };
        let result = RunResult {
            rounds: per_round.len(),
            converged: self.converged,
            components,
            per_round,
            final_state: self.state,
            phase1_rounds: None,
        };
        Ok((result, snapshots))
    }

    pub fn run(self, max_rounds: usize) -> Result<RunResult, EngineError> {
        self.run_recorded(max_rounds, false).map(|(r, _)| r)
    }
}

/// Runs `scheme` on `g` until no cluster changes or `max_rounds` rounds
/// have executed. `rounds` includes the round that confirms the fixpoint.
pub fn run<S: HashScheme + ?Sized>(g: &Graph, scheme: &S, max_rounds: usize) -> Result<RunResult, EngineError> {
    Engine::new(g, scheme).run(max_rounds)
}

/// Like [`run`], starting from `state`.
pub fn run_from<S: HashScheme + ?Sized>(
    g: &Graph,
    scheme: &S,
    state: ClusterState,
    max_rounds: usize,
) -> Result<RunResult, EngineError> {
    Engine::from_state(g, scheme, state)?.run(max_rounds)
}

/// Like [`run`], also returning every round's state when `record` is set.
pub fn replay<S: HashScheme + ?Sized>(
    g: &Graph,
    scheme: &S,
    max_rounds: usize,
    record: bool,
) -> Result<(RunResult, Vec<ClusterState>), EngineError> {
    Engine::new(g, scheme).run_recorded(max_rounds, record)
}

/// Exports `state` after checking that one more period of rounds leaves
/// it unchanged.
pub fn export_components<S: HashScheme + ?Sized>(
    g: &Graph,
    scheme: &S,
    state: &ClusterState,
) -> Result<Vec<NodeSet>, EngineError> {
    let mut probe = Engine::from_state(g, scheme, state.clone())?;
    for _ in 0..scheme.period().max(1) {
        probe.step()?;
    }
    if probe.state.clusters != state.clusters {
        return Err(EngineError::NotConverged);
    }
    Ok(scheme.export(state))
}
