//! Multi-step transition function, relative head positions and the
//! single-head consistency filter.
//!
//! A [`ReadingProfile`] fixes, for every head, the symbol it claims to read at
//! each of `T` steps. [`multi_step`] enumerates every computation log the
//! machine can produce under those readings, ignoring whether the readings
//! could come from one tape. [`consistent_filter`] keeps only logs in which a
//! chosen head reads the same symbol whenever it revisits a relative offset.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::automaton::{AutomatonSpec, StateId, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultistepError {
    #[error("step index {index} is outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("reading profiles need at least one step")]
    EmptyProfile,
    #[error("profile rows have unequal lengths")]
    RaggedProfile,
    #[error("profile has {found} rows but the automaton has {expected} heads")]
    ArityMismatch { expected: usize, found: usize },
    #[error("head {head} does not exist (automaton has {heads} heads)")]
    HeadOutOfRange { head: usize, heads: usize },
}

/// Whether the first reading of every head must be ⊢.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StartMode {
    /// No constraint on the initial readings.
    #[default]
    Literal,
    /// Every head must read ⊢ at step 1.
    Strict,
}

/// Per-head claimed readings, all of the same length.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReadingProfile {
    rows: Vec<Vec<Sym>>,
}

impl ReadingProfile {
    pub fn new(rows: Vec<Vec<Sym>>) -> Result<Self, MultistepError> {
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(MultistepError::RaggedProfile);
            }
        }
        Ok(ReadingProfile { rows })
    }

    /// Builds a profile from per-step columns (one k-tuple per step).
    pub fn from_columns(heads: usize, columns: &[Vec<Sym>]) -> Self {
        let rows = (0..heads)
            .map(|j| columns.iter().map(|c| c[j]).collect())
            .collect();
        ReadingProfile { rows }
    }

    pub fn heads(&self) -> usize {
        self.rows.len()
    }

    /// Number of steps T.
    pub fn len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, head: usize) -> &[Sym] {
        &self.rows[head]
    }

    pub fn rows(&self) -> &[Vec<Sym>] {
        &self.rows
    }

    /// The k symbols read at step `t` (zero-based).
    pub fn column(&self, t: usize) -> Vec<Sym> {
        self.rows.iter().map(|r| r[t]).collect()
    }

    pub fn concat(&self, extension: &ReadingProfile) -> ReadingProfile {
        ReadingProfile {
            rows: self
                .rows
                .iter()
                .zip(&extension.rows)
                .map(|(a, b)| a.iter().chain(b).copied().collect())
                .collect(),
        }
    }
}

/// A reached state and one movement history per head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComputationLog {
    pub reached: StateId,
    pub histories: Vec<Vec<i8>>,
}

impl ComputationLog {
    pub fn len(&self) -> usize {
        self.histories.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends `extension`'s histories and takes its reached state.
    pub fn concat(&self, extension: &ComputationLog) -> ComputationLog {
        ComputationLog {
            reached: extension.reached,
            histories: self
                .histories
                .iter()
                .zip(&extension.histories)
                .map(|(a, b)| a.iter().chain(b).copied().collect())
                .collect(),
        }
    }
}

/// Offset of a head while making its `i`-th transition (1-based): the sum of
/// the first `i - 1` movements.
pub fn pos(history: &[i8], i: usize) -> Result<i64, MultistepError> {
    if i == 0 || i > history.len() + 1 {
        return Err(MultistepError::IndexOutOfRange {
            index: i,
            max: history.len() + 1,
        });
    }
    Ok(history[..i - 1].iter().map(|&d| d as i64).sum())
}

fn check_profile(a: &AutomatonSpec, g: &ReadingProfile) -> Result<(), MultistepError> {
    if g.heads() != a.heads() {
        return Err(MultistepError::ArityMismatch {
            expected: a.heads(),
            found: g.heads(),
        });
    }
    if g.is_empty() {
        return Err(MultistepError::EmptyProfile);
    }
    Ok(())
}

/// All computation logs of `T = g.len()` steps starting from `q`.
pub fn multi_step(
    a: &AutomatonSpec,
    q: StateId,
    g: &ReadingProfile,
) -> Result<BTreeSet<ComputationLog>, MultistepError> {
    check_profile(a, g)?;
    let mut logs = vec![ComputationLog {
        reached: q,
        histories: vec![Vec::new(); a.heads()],
    }];
    for t in 0..g.len() {
        let reading = g.column(t);
        logs = logs
            .iter()
            .flat_map(|log| {
                a.options(log.reached, &reading).iter().map(move |mv| {
                    let mut next = log.clone();
                    next.reached = mv.target;
                    for (h, &d) in next.histories.iter_mut().zip(&mv.shifts) {
                        h.push(d);
                    }
                    next
                })
            })
            .collect();
        if logs.is_empty() {
            break;
        }
    }
    Ok(logs.into_iter().collect())
}

/// True iff every offset visited by the history is read as a single symbol.
pub fn is_head_consistent(history: &[i8], readings: &[Sym]) -> bool {
    let mut seen: HashMap<i64, Sym> = HashMap::new();
    let mut offset = 0i64;
    for (t, &sym) in readings.iter().enumerate() {
        if *seen.entry(offset).or_insert(sym) != sym {
            return false;
        }
        if let Some(&d) = history.get(t) {
            offset += d as i64;
        }
    }
    true
}

fn starts_on_left_end(g: &ReadingProfile) -> bool {
    g.rows().iter().all(|r| r.first() == Some(&Sym::LEFT_END))
}

/// The logs of [`multi_step`] that are consistent for `head`.
pub fn consistent_filter(
    a: &AutomatonSpec,
    q: StateId,
    g: &ReadingProfile,
    head: usize,
    mode: StartMode,
) -> Result<BTreeSet<ComputationLog>, MultistepError> {
    check_head(a, head)?;
    let logs = multi_step(a, q, g)?;
    if mode == StartMode::Strict && !starts_on_left_end(g) {
        return Ok(BTreeSet::new());
    }
    Ok(logs
        .into_iter()
        .filter(|log| is_head_consistent(&log.histories[head], g.row(head)))
        .collect())
}

fn check_head(a: &AutomatonSpec, head: usize) -> Result<(), MultistepError> {
    if head >= a.heads() {
        return Err(MultistepError::HeadOutOfRange {
            head,
            heads: a.heads(),
        });
    }
    Ok(())
}

/// Membership test `log ∈ multi_step(a, q, g)` without enumerating the set.
///
/// Tracks the set of states reachable after each prefix of the histories.
pub fn contains_log(a: &AutomatonSpec, q: StateId, g: &ReadingProfile, log: &ComputationLog) -> bool {
    if check_profile(a, g).is_err()
        || log.histories.len() != a.heads()
        || log.histories.iter().any(|h| h.len() != g.len())
    {
        return false;
    }
    let mut current: BTreeSet<StateId> = BTreeSet::from([q]);
    for t in 0..g.len() {
        let reading = g.column(t);
        let step: Vec<i8> = log.histories.iter().map(|h| h[t]).collect();
        current = current
            .iter()
            .flat_map(|&s| a.options(s, &reading))
            .filter(|mv| mv.shifts == step)
            .map(|mv| mv.target)
            .collect();
        if current.is_empty() {
            return false;
        }
    }
    current.contains(&log.reached)
}

/// Membership test `log ∈ consistent_filter(a, q, g, head, mode)`.
pub fn contains_consistent_log(
    a: &AutomatonSpec,
    q: StateId,
    g: &ReadingProfile,
    log: &ComputationLog,
    head: usize,
    mode: StartMode,
) -> bool {
    head < a.heads()
        && (mode == StartMode::Literal || starts_on_left_end(g))
        && contains_log(a, q, g, log)
        && is_head_consistent(&log.histories[head], g.row(head))
}
