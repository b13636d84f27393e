//! Mapper output buffering and the group-by-key shuffle.
//!
//! Unicast messages are bucketed by key with a counting sort. Multicast
//! messages (one payload to every key in a set) are never expanded: a
//! sweep over the key space tracks which multicasts cover the current key
//! and maintains the union of their payloads incrementally.

use std::collections::BTreeSet;
use std::ops::Deref;

use super::merge::merge_runs;
use crate::error::EngineError;
use crate::nodeset::{NodeSet, Run};
use crate::NodeId;

/// A payload or key set that is either borrowed from the current state or
/// built by the mapper.
#[derive(Debug)]
pub enum SetRef<'a> {
    Borrowed(&'a NodeSet),
    Owned(NodeSet),
}

impl Deref for SetRef<'_> {
    type Target = NodeSet;

    fn deref(&self) -> &NodeSet {
        match self {
            SetRef::Borrowed(s) => s,
            SetRef::Owned(s) => s,
        }
    }
}

impl<'a> From<&'a NodeSet> for SetRef<'a> {
    fn from(s: &'a NodeSet) -> Self {
        SetRef::Borrowed(s)
    }
}

impl From<NodeSet> for SetRef<'_> {
    fn from(s: NodeSet) -> Self {
        SetRef::Owned(s)
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Id(NodeId),
    Set(u32),
}

/// Collects the key-value pairs emitted during one map phase.
///
/// The first contract violation (key or payload id outside the id space,
/// empty payload) is recorded and reported by the engine after the phase.
pub struct Emitter<'a> {
    node_count: usize,
    sets: Vec<SetRef<'a>>,
    unicast: Vec<(NodeId, Slot)>,
    multicast: Vec<(u32, u32)>,
    fault: Option<EngineError>,
}

impl<'a> Emitter<'a> {
    pub(crate) fn new(node_count: usize) -> Self {
        Emitter {
            node_count,
            sets: Vec::new(),
            unicast: Vec::new(),
            multicast: Vec::new(),
            fault: None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    fn fail(&mut self, e: EngineError) {
        self.fault.get_or_insert(e);
    }

    fn key_ok(&mut self, key: NodeId) -> bool {
        if (key as usize) < self.node_count {
            return true;
        }
        let node_count = self.node_count;
        self.fail(EngineError::KeyOutOfRange { key, node_count });
        false
    }

    fn payload_ok(&mut self, key: NodeId, payload: &NodeSet) -> bool {
        match payload.max() {
            None => {
                self.fail(EngineError::EmptyPayload(key));
                false
            }
            Some(id) if id as usize >= self.node_count => {
                let node_count = self.node_count;
                self.fail(EngineError::PayloadOutOfRange { id, node_count });
                false
            }
            Some(_) => true,
        }
    }

    fn push_set(&mut self, set: SetRef<'a>) -> u32 {
        self.sets.push(set);
        (self.sets.len() - 1) as u32
    }

    /// Sends the single id `id` to reducer `key`.
    pub fn send_id(&mut self, key: NodeId, id: NodeId) {
        if !self.key_ok(key) {
            return;
        }
        if id as usize >= self.node_count {
            let node_count = self.node_count;
            self.fail(EngineError::PayloadOutOfRange { id, node_count });
            return;
        }
        self.unicast.push((key, Slot::Id(id)));
    }

    /// Sends `set` to reducer `key`.
    pub fn send_set(&mut self, key: NodeId, set: impl Into<SetRef<'a>>) {
        let set = set.into();
        if !self.key_ok(key) || !self.payload_ok(key, &set) {
            return;
        }
        let slot = if set.len() == 1 {
            Slot::Id(set.min().expect("nonempty"))
        } else {
            Slot::Set(self.push_set(set))
        };
        self.unicast.push((key, slot));
    }

    /// Sends `payload` to every reducer in `keys`.
    pub fn multicast(&mut self, keys: impl Into<SetRef<'a>>, payload: impl Into<SetRef<'a>>) {
        let (keys, payload) = (keys.into(), payload.into());
        let Some(first) = keys.min() else { return };
        if !self.key_ok(keys.max().expect("nonempty")) || !self.payload_ok(first, &payload) {
            return;
        }
        let k = self.push_set(keys);
        let p = self.push_set(payload);
        self.multicast.push((k, p));
    }

    /// Sends `set` to every reducer named in `set`.
    pub fn multicast_to_members(&mut self, set: &'a NodeSet) {
        let Some(first) = set.min() else { return };
        if !self.key_ok(set.max().expect("nonempty")) || !self.payload_ok(first, set) {
            return;
        }
        let i = self.push_set(SetRef::Borrowed(set));
        self.multicast.push((i, i));
    }

    pub(crate) fn take_fault(&mut self) -> Option<EngineError> {
        self.fault.take()
    }
}

/// One payload as seen by a reducer.
#[derive(Clone, Copy, Debug)]
pub enum PayloadRef<'s> {
    Id(NodeId),
    Set(&'s NodeSet),
}

impl PayloadRef<'_> {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            PayloadRef::Id(_) => 1,
            PayloadRef::Set(s) => s.len(),
        }
    }

    pub fn min(&self) -> NodeId {
        match self {
            PayloadRef::Id(v) => *v,
            PayloadRef::Set(s) => s.min().expect("payloads are nonempty"),
        }
    }
}

/// Everything delivered to one reducer in one round.
pub struct Incoming<'s> {
    slots: &'s [Slot],
    sets: &'s [SetRef<'s>],
    multicast: Option<&'s NodeSet>,
    multicast_count: usize,
}

impl<'s> Incoming<'s> {
    /// Number of messages received.
    pub fn len(&self) -> usize {
        self.slots.len() + self.multicast_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unicast payloads in emission order.
    pub fn unicasts(&self) -> impl Iterator<Item = PayloadRef<'s>> + '_ {
        self.slots.iter().map(|s| match *s {
            Slot::Id(v) => PayloadRef::Id(v),
            Slot::Set(i) => PayloadRef::Set(&self.sets[i as usize]),
        })
    }

    /// Union of all multicast payloads addressed to this key.
    pub fn multicast_union(&self) -> Option<&'s NodeSet> {
        self.multicast
    }

    /// Smallest id across all payloads.
    pub fn min(&self) -> Option<NodeId> {
        let uni = self.unicasts().map(|p| p.min()).min();
        let multi = self.multicast.and_then(NodeSet::min);
        match (uni, multi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Union of all payloads.
    pub fn union(&self) -> NodeSet {
        let mut ids = Vec::new();
        let mut sets: Vec<&NodeSet> = Vec::new();
        for p in self.unicasts() {
            match p {
                PayloadRef::Id(v) => ids.push(v),
                PayloadRef::Set(s) => sets.push(s),
            }
        }
        let ids = NodeSet::from_unsorted(ids);
        sets.push(&ids);
        sets.extend(self.multicast);
        merge_runs(sets)
    }
}

/// How multicast unions are maintained during the sweep. Both strategies
/// produce identical reducer input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ShuffleMode {
    /// Pick per round from a cost estimate.
    #[default]
    Auto,
    /// Coverage counts in a segment tree over the id space.
    Coverage,
    /// Re-union the active payloads whenever the active set changes.
    Direct,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Traffic {
    pub messages: u64,
    pub node_id_volume: u64,
    pub max_reducer_in: u64,
}

/// Groups the emitted pairs by key and calls `reduce` for every key in
/// ascending order, including keys that received nothing.
pub(crate) fn deliver<F>(em: Emitter<'_>, mode: ShuffleMode, mut reduce: F) -> Traffic
where
    F: FnMut(NodeId, &Incoming<'_>),
{
    let n = em.node_count;
    let mut traffic = Traffic::default();

    // counting sort of unicasts by key
    let mut offsets = vec![0usize; n + 1];
    for &(k, _) in &em.unicast {
        offsets[k as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut slots = vec![Slot::Id(0); em.unicast.len()];
    let mut uni_volume = vec![0u64; n];
    for &(k, slot) in &em.unicast {
        let k = k as usize;
        slots[cursor[k]] = slot;
        cursor[k] += 1;
        let len = match slot {
            Slot::Id(_) => 1,
            Slot::Set(i) => em.sets[i as usize].len() as u64,
        };
        uni_volume[k] += len;
        traffic.node_id_volume += len;
    }
    traffic.messages = em.unicast.len() as u64;

    // multicast sweep events: (position, multicast, +1 start / -1 end)
    let mut events: Vec<(NodeId, u32, i8)> = Vec::new();
    for (m, &(k, p)) in em.multicast.iter().enumerate() {
        let keys = &em.sets[k as usize];
        let plen = em.sets[p as usize].len() as u64;
        traffic.messages += keys.len() as u64;
        traffic.node_id_volume += keys.len() as u64 * plen;
        for r in keys.runs() {
            events.push((r.lo, m as u32, 1));
            if (r.hi as usize) + 1 < n {
                events.push((r.hi + 1, m as u32, -1));
            }
        }
    }
    // ends before starts at the same position
    events.sort_unstable_by_key(|&(pos, m, d)| (pos, d, m));

    let mode = match mode {
        ShuffleMode::Auto => choose_mode(&em, n),
        m => m,
    };
    let mut union = MulticastUnion::new(&em, n, mode);
    let mut next_event = 0;
    let mut active_volume = 0u64;
    let mut active_count = 0usize;
    let mut current: Option<NodeSet> = None;

    for key in 0..n as NodeId {
        let mut changed = false;
        while next_event < events.len() && events[next_event].0 == key {
            let (_, m, d) = events[next_event];
            let (_, p) = em.multicast[m as usize];
            let plen = em.sets[p as usize].len() as u64;
            if d > 0 {
                active_volume += plen;
                active_count += 1;
            } else {
                active_volume -= plen;
                active_count -= 1;
            }
            union.apply(m, d);
            changed = true;
            next_event += 1;
        }
        if changed {
            current = if active_count == 0 {
                None
            } else {
                Some(union.materialize())
            };
        }
        let k = key as usize;
        let incoming = Incoming {
            slots: &slots[offsets[k]..offsets[k + 1]],
            sets: &em.sets,
            multicast: current.as_ref(),
            multicast_count: active_count,
        };
        traffic.max_reducer_in = traffic.max_reducer_in.max(uni_volume[k] + active_volume);
        reduce(key, &incoming);
    }
    traffic
}

/// Above this many bitset words in total, dense payloads fall back to runs.
const DENSE_WORD_BUDGET: usize = 1 << 24;

fn choose_mode(em: &Emitter<'_>, n: usize) -> ShuffleMode {
    if em.multicast.is_empty() {
        return ShuffleMode::Direct;
    }
    let words = (n / 64 + 1) as u64;
    let log_n = (usize::BITS - n.leading_zeros()) as u64;
    let (mut coverage, mut direct) = (n as u64, n as u64);
    for &(k, p) in &em.multicast {
        let (keys, payload) = (&em.sets[k as usize], &em.sets[p as usize]);
        let pruns = payload.runs().len() as u64;
        coverage += 2 * keys.runs().len() as u64 * pruns * log_n;
        direct += keys.len() as u64 * pruns.min(words);
    }
    if coverage <= direct {
        ShuffleMode::Coverage
    } else {
        ShuffleMode::Direct
    }
}

enum MulticastUnion<'e, 'a> {
    Coverage {
        em: &'e Emitter<'a>,
        tree: CoverageTree,
    },
    Direct {
        em: &'e Emitter<'a>,
        active: BTreeSet<u32>,
        /// Bitset per multicast whose payload has many runs.
        dense: Vec<Option<Vec<u64>>>,
        words: usize,
    },
}

impl<'e, 'a> MulticastUnion<'e, 'a> {
    fn new(em: &'e Emitter<'a>, n: usize, mode: ShuffleMode) -> Self {
        if mode == ShuffleMode::Coverage {
            return MulticastUnion::Coverage {
                em,
                tree: CoverageTree::new(n),
            };
        }
        let words = n / 64 + 1;
        let mut budget = DENSE_WORD_BUDGET;
        let dense = em
            .multicast
            .iter()
            .map(|&(_, p)| {
                let payload = &em.sets[p as usize];
                if payload.runs().len() > words && budget >= words {
                    budget -= words;
                    Some(to_bits(payload, words))
                } else {
                    None
                }
            })
            .collect();
        MulticastUnion::Direct {
            em,
            active: BTreeSet::new(),
            dense,
            words,
        }
    }

    fn apply(&mut self, m: u32, delta: i8) {
        match self {
            MulticastUnion::Coverage { em, tree } => {
                let (_, p) = em.multicast[m as usize];
                for r in em.sets[p as usize].runs() {
                    tree.add(*r, delta as i32);
                }
            }
            MulticastUnion::Direct { active, .. } => {
                if delta > 0 {
                    active.insert(m);
                } else {
                    active.remove(&m);
                }
            }
        }
    }

    fn materialize(&self) -> NodeSet {
        match self {
            MulticastUnion::Coverage { tree, .. } => {
                let mut runs = Vec::new();
                tree.collect(&mut runs);
                NodeSet::from_run_soup(runs)
            }
            MulticastUnion::Direct {
                em,
                active,
                dense,
                words,
            } => {
                let mut bits: Option<Vec<u64>> = None;
                let mut sparse: Vec<&NodeSet> = Vec::new();
                for &m in active {
                    match &dense[m as usize] {
                        Some(b) => {
                            let acc = bits.get_or_insert_with(|| vec![0; *words]);
                            for (a, x) in acc.iter_mut().zip(b) {
                                *a |= x;
                            }
                        }
                        None => sparse.push(&em.sets[em.multicast[m as usize].1 as usize]),
                    }
                }
                let from_bits = bits.map(|b| from_bits(&b));
                sparse.extend(from_bits.as_ref());
                merge_runs(sparse)
            }
        }
    }
}

fn to_bits(set: &NodeSet, words: usize) -> Vec<u64> {
    let mut b = vec![0u64; words];
    for v in set.iter() {
        b[v as usize / 64] |= 1 << (v % 64);
    }
    b
}

fn from_bits(bits: &[u64]) -> NodeSet {
    let mut runs: Vec<Run> = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            let lo = x.trailing_zeros();
            let ones = (x >> lo).trailing_ones();
            let base = (w * 64) as NodeId;
            let run = Run {
                lo: base + lo,
                hi: base + lo + ones - 1,
            };
            match runs.last_mut() {
                Some(last) if last.hi + 1 == run.lo => last.hi = run.hi,
                _ => runs.push(run),
            }
            x = if lo + ones >= 64 {
                0
            } else {
                x & !((1u64 << (lo + ones)) - 1)
            };
        }
    }
    NodeSet::from_run_soup(runs)
}

/// Segment tree of coverage counts over `0..n`, enough to list the ids
/// covered at least once.
struct CoverageTree {
    size: usize,
    cover: Vec<u32>,
    any: Vec<bool>,
}

impl CoverageTree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two().max(1);
        CoverageTree {
            size,
            cover: vec![0; 2 * size],
            any: vec![false; 2 * size],
        }
    }

    fn add(&mut self, r: Run, delta: i32) {
        self.update(1, 0, self.size - 1, r.lo as usize, r.hi as usize, delta);
    }

    fn update(&mut self, node: usize, nlo: usize, nhi: usize, lo: usize, hi: usize, delta: i32) {
        if hi < nlo || nhi < lo {
            return;
        }
        if lo <= nlo && nhi <= hi {
            self.cover[node] = (self.cover[node] as i64 + delta as i64) as u32;
        } else {
            let mid = (nlo + nhi) / 2;
            self.update(2 * node, nlo, mid, lo, hi, delta);
            self.update(2 * node + 1, mid + 1, nhi, lo, hi, delta);
        }
        self.any[node] = self.cover[node] > 0 || (node < self.size && (self.any[2 * node] || self.any[2 * node + 1]));
    }

    fn collect(&self, out: &mut Vec<Run>) {
        self.walk(1, 0, self.size - 1, out);
    }

    fn walk(&self, node: usize, nlo: usize, nhi: usize, out: &mut Vec<Run>) {
        if !self.any[node] {
            return;
        }
        if self.cover[node] > 0 {
            let run = Run {
                lo: nlo as NodeId,
                hi: nhi as NodeId,
            };
            match out.last_mut() {
                Some(last) if last.hi + 1 == run.lo => last.hi = run.hi,
                _ => out.push(run),
            }
            return;
        }
        let mid = (nlo + nhi) / 2;
        self.walk(2 * node, nlo, mid, out);
        self.walk(2 * node + 1, mid + 1, nhi, out);
    }
}
