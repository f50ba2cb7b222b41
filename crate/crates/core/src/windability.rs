//! Bounded search for windable heads.
//!
//! A head is windable when some run from the initial state, with that head's
//! readings kept consistent and every other head's readings unconstrained,
//! reaches a state `q` and then a cycle back to `q` in which the head's
//! movements sum to zero, still consistently. The property quantifies over
//! unbounded lengths, so the search here is a semi-decision: it reports a
//! witness or "no witness within bounds", never unconditional reliability.
//!
//! The search graph has nodes `(state, offset of the head, committed readings
//! per offset)`. Only the scrutinised head's readings are committed; every
//! other head may read any symbol at every step, which is exactly the freedom
//! the consistency filter allows.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::automaton::{AutomatonSpec, StateId, Sym};
use crate::multistep::{contains_consistent_log, ComputationLog, ReadingProfile, StartMode};

pub const DEFAULT_NODE_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WindabilityError {
    #[error("winding search exceeded the cap of {cap} nodes")]
    ResourceLimit { cap: usize },
    #[error("head {head} does not exist (automaton has {heads} heads)")]
    HeadOutOfRange { head: usize, heads: usize },
    #[error("search bounds must be positive")]
    InvalidBounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchBounds {
    pub max_stem_steps: usize,
    pub max_cycle_steps: usize,
    /// Largest |offset| at which the scrutinised head may read.
    pub window_radius: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_stem_steps: 16,
            max_cycle_steps: 16,
            window_radius: 8,
        }
    }
}

impl SearchBounds {
    pub fn new(stem: usize, cycle: usize, window: usize) -> Result<Self, WindabilityError> {
        if stem == 0 || cycle == 0 || window == 0 {
            return Err(WindabilityError::InvalidBounds);
        }
        Ok(SearchBounds {
            max_stem_steps: stem,
            max_cycle_steps: cycle,
            window_radius: window,
        })
    }
}

impl fmt::Display for SearchBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stem<={} cycle<={} window<={}",
            self.max_stem_steps, self.max_cycle_steps, self.window_radius
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: StartMode,
    pub node_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: StartMode::Literal,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// A checkable certificate that a head is windable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindingWitness {
    pub head: usize,
    pub stem_profile: ReadingProfile,
    pub cycle_profile: ReadingProfile,
    /// Log of the stem, reaching the cycle state.
    pub stem_log: ComputationLog,
    /// Histories of the cycle, returning to the same state.
    pub cycle_log: ComputationLog,
}

impl WindingWitness {
    pub fn cycle_state(&self) -> StateId {
        self.stem_log.reached
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeadKind {
    Windable,
    Reliable,
}

impl fmt::Display for HeadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeadKind::Windable => "windable",
            HeadKind::Reliable => "reliable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeadStatus {
    Windable(Box<WindingWitness>),
    NoWitnessWithinBounds(SearchBounds),
    /// Set by the caller instead of searched.
    Overridden(HeadKind),
}

impl HeadStatus {
    pub fn kind(&self) -> HeadKind {
        match self {
            HeadStatus::Windable(_) => HeadKind::Windable,
            HeadStatus::NoWitnessWithinBounds(_) => HeadKind::Reliable,
            HeadStatus::Overridden(kind) => *kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadClassification {
    pub statuses: Vec<HeadStatus>,
}

impl HeadClassification {
    /// A classification given directly by head kinds, all marked overridden.
    pub fn from_kinds(kinds: &[HeadKind]) -> Self {
        HeadClassification {
            statuses: kinds.iter().map(|&k| HeadStatus::Overridden(k)).collect(),
        }
    }

    pub fn kinds(&self) -> Vec<HeadKind> {
        self.statuses.iter().map(HeadStatus::kind).collect()
    }

    pub fn windable_count(&self) -> usize {
        self.statuses
            .iter()
            .filter(|s| s.kind() == HeadKind::Windable)
            .count()
    }

    pub fn reliable_count(&self) -> usize {
        self.statuses.len() - self.windable_count()
    }

    pub fn is_overridden(&self, head: usize) -> bool {
        matches!(self.statuses[head], HeadStatus::Overridden(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    state: StateId,
    offset: i32,
    committed: Vec<Option<Sym>>,
}

#[derive(Clone, Debug)]
struct Edge {
    reading: Vec<Sym>,
    shifts: Vec<i8>,
}

struct Searcher<'a> {
    a: &'a AutomatonSpec,
    head: usize,
    radius: i32,
    mode: StartMode,
    cap: usize,
}

impl Searcher<'_> {
    fn slot(&self, offset: i32) -> usize {
        (offset + self.radius) as usize
    }

    fn expand(&self, node: &Node, first_step: bool) -> Vec<(Edge, Node)> {
        let mut out = Vec::new();
        let slot = self.slot(node.offset);
        for (reading, opts) in self.a.transitions_from(node.state) {
            if first_step
                && self.mode == StartMode::Strict
                && reading.iter().any(|&s| s != Sym::LEFT_END)
            {
                continue;
            }
            let sym = reading[self.head];
            if node.committed[slot].is_some_and(|c| c != sym) {
                continue;
            }
            for mv in opts {
                let offset = node.offset + mv.shifts[self.head] as i32;
                if offset.abs() > self.radius {
                    continue;
                }
                let mut committed = node.committed.clone();
                committed[slot] = Some(sym);
                out.push((
                    Edge {
                        reading: reading.to_vec(),
                        shifts: mv.shifts.clone(),
                    },
                    Node {
                        state: mv.target,
                        offset,
                        committed,
                    },
                ));
            }
        }
        out
    }

    /// Shortest path from `from` (1..=max_steps edges) to any node with the
    /// same state and offset.
    fn find_cycle(&self, from: &Node, max_steps: usize) -> Result<Option<Vec<Edge>>, WindabilityError> {
        let mut nodes: Vec<Node> = vec![from.clone()];
        let mut parent: Vec<Option<(usize, Edge)>> = vec![None];
        let mut seen: HashMap<Node, usize> = HashMap::from([(from.clone(), 0)]);
        let mut frontier = vec![0usize];
        for _depth in 0..max_steps {
            let mut next = Vec::new();
            for &u in &frontier {
                for (edge, node) in self.expand(&nodes[u], false) {
                    if node.state == from.state && node.offset == from.offset {
                        let mut path = vec![edge];
                        let mut cur = u;
                        while let Some((p, e)) = &parent[cur] {
                            path.push(e.clone());
                            cur = *p;
                        }
                        path.reverse();
                        return Ok(Some(path));
                    }
                    if seen.contains_key(&node) {
                        continue;
                    }
                    if nodes.len() >= self.cap {
                        return Err(WindabilityError::ResourceLimit { cap: self.cap });
                    }
                    seen.insert(node.clone(), nodes.len());
                    next.push(nodes.len());
                    nodes.push(node);
                    parent.push(Some((u, edge)));
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(None)
    }
}

fn path_to(parent: &[Option<(usize, Edge)>], mut cur: usize) -> Vec<Edge> {
    let mut path = Vec::new();
    while let Some((p, e)) = &parent[cur] {
        path.push(e.clone());
        cur = *p;
    }
    path.reverse();
    path
}

fn to_profile_and_log(heads: usize, edges: &[Edge], reached: StateId) -> (ReadingProfile, ComputationLog) {
    let columns: Vec<Vec<Sym>> = edges.iter().map(|e| e.reading.clone()).collect();
    let histories = (0..heads)
        .map(|j| edges.iter().map(|e| e.shifts[j]).collect())
        .collect();
    (
        ReadingProfile::from_columns(heads, &columns),
        ComputationLog { reached, histories },
    )
}

/// Searches for a winding witness for `head` within `bounds`.
///
/// Stem end points are visited in breadth-first order, so the returned
/// witness has a shortest possible stem; its cycle is shortest for that stem.
pub fn find_winding_witness(
    a: &AutomatonSpec,
    head: usize,
    bounds: &SearchBounds,
    options: &SearchOptions,
) -> Result<Option<WindingWitness>, WindabilityError> {
    if head >= a.heads() {
        return Err(WindabilityError::HeadOutOfRange {
            head,
            heads: a.heads(),
        });
    }
    let radius = bounds.window_radius as i32;
    let searcher = Searcher {
        a,
        head,
        radius,
        mode: options.mode,
        cap: options.node_cap,
    };
    let start = Node {
        state: a.initial(),
        offset: 0,
        committed: vec![None; 2 * bounds.window_radius + 1],
    };
    let mut nodes = vec![start.clone()];
    let mut parent: Vec<Option<(usize, Edge)>> = vec![None];
    let mut seen: HashMap<Node, usize> = HashMap::from([(start, 0)]);
    let mut frontier = vec![0usize];

    for depth in 0..bounds.max_stem_steps {
        let mut next = Vec::new();
        for &u in &frontier {
            for (edge, node) in searcher.expand(&nodes[u], depth == 0) {
                if seen.contains_key(&node) {
                    continue;
                }
                if nodes.len() >= searcher.cap {
                    return Err(WindabilityError::ResourceLimit { cap: searcher.cap });
                }
                let v = nodes.len();
                seen.insert(node.clone(), v);
                nodes.push(node);
                parent.push(Some((u, edge)));
                next.push(v);
            }
        }
        for &v in &next {
            if let Some(cycle) = searcher.find_cycle(&nodes[v], bounds.max_cycle_steps)? {
                let stem = path_to(&parent, v);
                let q = nodes[v].state;
                let (stem_profile, stem_log) = to_profile_and_log(a.heads(), &stem, q);
                let (cycle_profile, cycle_log) = to_profile_and_log(a.heads(), &cycle, q);
                return Ok(Some(WindingWitness {
                    head,
                    stem_profile,
                    cycle_profile,
                    stem_log,
                    cycle_log,
                }));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}

/// Re-checks a witness against the multi-step definitions, independently of
/// the search that produced it.
pub fn verify_witness(a: &AutomatonSpec, wt: &WindingWitness, mode: StartMode) -> bool {
    let head = wt.head;
    let k = a.heads();
    let shapes_ok = head < k
        && wt.stem_profile.heads() == k
        && wt.cycle_profile.heads() == k
        && !wt.stem_profile.is_empty()
        && !wt.cycle_profile.is_empty()
        && wt.stem_log.histories.len() == k
        && wt.cycle_log.histories.len() == k
        && wt.stem_log.len() == wt.stem_profile.len()
        && wt.cycle_log.len() == wt.cycle_profile.len()
        && wt.stem_log.reached == wt.cycle_log.reached;
    if !shapes_ok {
        return false;
    }
    let cycle_sum: i64 = wt.cycle_log.histories[head].iter().map(|&d| d as i64).sum();
    if cycle_sum != 0 {
        return false;
    }
    let q0 = a.initial();
    let stem_ok = contains_consistent_log(a, q0, &wt.stem_profile, &wt.stem_log, head, mode);
    let whole_profile = wt.stem_profile.concat(&wt.cycle_profile);
    let whole_log = wt.stem_log.concat(&wt.cycle_log);
    stem_ok && contains_consistent_log(a, q0, &whole_profile, &whole_log, head, mode)
}

/// Classifies every head, searching heads in parallel.
///
/// `overrides[i] = Some(kind)` replaces the search for head `i`.
pub fn classify_heads(
    a: &AutomatonSpec,
    bounds: &SearchBounds,
    options: &SearchOptions,
    overrides: &[Option<HeadKind>],
) -> Result<HeadClassification, WindabilityError> {
    let statuses = (0..a.heads())
        .into_par_iter()
        .map(|head| match overrides.get(head).copied().flatten() {
            Some(kind) => Ok(HeadStatus::Overridden(kind)),
            None => Ok(match find_winding_witness(a, head, bounds, options)? {
                Some(w) => HeadStatus::Windable(Box::new(w)),
                None => HeadStatus::NoWitnessWithinBounds(*bounds),
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HeadClassification { statuses })
}
