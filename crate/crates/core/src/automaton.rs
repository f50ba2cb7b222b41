//! Multi-head two-way nondeterministic finite automata.
//!
//! A machine reads `⊢ w ⊣` with `k` read-only heads. Tape symbols are
//! encoded as [`Sym`] indices into Γ = {⊢, ⊣} ∪ Σ. Transition option sets are
//! kept in canonical order (target state index, then movement vector) so that
//! branch indices are stable across serializations.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Token used for the left endmarker in text formats.
pub const LEFT_END_TOKEN: &str = "^";
/// Token used for the right endmarker in text formats.
pub const RIGHT_END_TOKEN: &str = "$";

/// Default cap on explored configurations for [`decide_membership`].
pub const DEFAULT_CONFIGURATION_CAP: usize = 4_000_000;

pub type StateId = usize;

/// A tape symbol: `0` is ⊢, `1` is ⊣ and `2 + j` is the j-th input symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub u16);

impl Sym {
    pub const LEFT_END: Sym = Sym(0);
    pub const RIGHT_END: Sym = Sym(1);

    pub fn input(index: usize) -> Sym {
        Sym(index as u16 + 2)
    }

    pub fn is_endmarker(self) -> bool {
        self.0 < 2
    }

    /// Index into Σ, or `None` for endmarkers.
    pub fn input_index(self) -> Option<usize> {
        (self.0 >= 2).then(|| self.0 as usize - 2)
    }
}

/// One nondeterministic option: next state and one movement per head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub target: StateId,
    pub shifts: Vec<i8>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("an automaton needs at least one head")]
    NoHeads,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` is a reserved endmarker and cannot be an input symbol")]
    ReservedSymbolInAlphabet(String),
    #[error("transition from `{from}` enters the initial state `{initial}`")]
    TransitionIntoInitial { from: String, initial: String },
    #[error("expected {expected} {what}, found {found}")]
    ArityMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("movement {0} is not one of -1, 0, 1")]
    InvalidMovement(i64),
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("configuration search exceeded the cap of {cap} configurations")]
    ResourceLimit { cap: usize },
    #[error("symbol {0:?} is not an input symbol of this automaton")]
    InvalidWordSymbol(Sym),
}

/// A transition line as written by a user, before name resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTransition {
    pub from: String,
    pub reading: Vec<String>,
    pub to: String,
    pub shifts: Vec<i64>,
}

/// An unvalidated machine description using symbol and state names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawAutomaton {
    pub heads: usize,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub accepting: String,
    pub transitions: Vec<RawTransition>,
}

/// A validated k-head two-way NFA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonSpec {
    heads: usize,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: StateId,
    accepting: StateId,
    transitions: Table,
}

type Table = BTreeMap<StateId, BTreeMap<Vec<Sym>, Vec<Move>>>;

fn nest(flat: BTreeMap<(StateId, Vec<Sym>), Vec<Move>>) -> Table {
    let mut table = Table::new();
    for ((q, reading), opts) in flat {
        table.entry(q).or_default().insert(reading, opts);
    }
    table
}

/// Validates a raw description and returns the canonical machine.
pub fn validate(raw: &RawAutomaton) -> Result<AutomatonSpec, AutomatonError> {
    if raw.heads == 0 {
        return Err(AutomatonError::NoHeads);
    }
    let mut symbol_index = HashMap::new();
    symbol_index.insert(LEFT_END_TOKEN, Sym::LEFT_END);
    symbol_index.insert(RIGHT_END_TOKEN, Sym::RIGHT_END);
    for (j, name) in raw.alphabet.iter().enumerate() {
        if name == LEFT_END_TOKEN || name == RIGHT_END_TOKEN {
            return Err(AutomatonError::ReservedSymbolInAlphabet(name.clone()));
        }
        if symbol_index.insert(name.as_str(), Sym::input(j)).is_some() {
            return Err(AutomatonError::Duplicate {
                what: "symbol",
                name: name.clone(),
            });
        }
    }
    let mut state_index = HashMap::new();
    for (i, name) in raw.states.iter().enumerate() {
        if state_index.insert(name.as_str(), i).is_some() {
            return Err(AutomatonError::Duplicate {
                what: "state",
                name: name.clone(),
            });
        }
    }
    let lookup_state = |name: &str| {
        state_index
            .get(name)
            .copied()
            .ok_or_else(|| AutomatonError::UnknownState(name.to_string()))
    };
    let initial = lookup_state(&raw.initial)?;
    let accepting = lookup_state(&raw.accepting)?;

    let mut transitions: BTreeMap<(StateId, Vec<Sym>), Vec<Move>> = BTreeMap::new();
    for t in &raw.transitions {
        let from = lookup_state(&t.from)?;
        let to = lookup_state(&t.to)?;
        if t.reading.len() != raw.heads {
            return Err(AutomatonError::ArityMismatch {
                what: "symbols",
                expected: raw.heads,
                found: t.reading.len(),
            });
        }
        if t.shifts.len() != raw.heads {
            return Err(AutomatonError::ArityMismatch {
                what: "movements",
                expected: raw.heads,
                found: t.shifts.len(),
            });
        }
        if to == initial {
            return Err(AutomatonError::TransitionIntoInitial {
                from: t.from.clone(),
                initial: raw.initial.clone(),
            });
        }
        let reading = t
            .reading
            .iter()
            .map(|s| {
                symbol_index
                    .get(s.as_str())
                    .copied()
                    .ok_or_else(|| AutomatonError::UnknownSymbol(s.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let shifts = t
            .shifts
            .iter()
            .map(|&d| match d {
                -1..=1 => Ok(d as i8),
                _ => Err(AutomatonError::InvalidMovement(d)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        transitions
            .entry((from, reading))
            .or_default()
            .push(Move { target: to, shifts });
    }
    for options in transitions.values_mut() {
        options.sort();
        options.dedup();
    }
    Ok(AutomatonSpec {
        heads: raw.heads,
        alphabet: raw.alphabet.clone(),
        states: raw.states.clone(),
        initial,
        accepting,
        transitions: nest(transitions),
    })
}

impl AutomatonSpec {
    pub fn heads(&self) -> usize {
        self.heads
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepting(&self) -> StateId {
        self.accepting
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.states[state]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    /// Size of the tape alphabet Γ.
    pub fn gamma_size(&self) -> usize {
        self.alphabet.len() + 2
    }

    /// All of Γ in index order: ⊢, ⊣, then Σ.
    pub fn gamma(&self) -> impl Iterator<Item = Sym> + Clone {
        (0..self.gamma_size() as u16).map(Sym)
    }

    pub fn symbol_name(&self, sym: Sym) -> &str {
        match sym {
            Sym::LEFT_END => LEFT_END_TOKEN,
            Sym::RIGHT_END => RIGHT_END_TOKEN,
            s => &self.alphabet[s.0 as usize - 2],
        }
    }

    pub fn symbol(&self, name: &str) -> Option<Sym> {
        match name {
            LEFT_END_TOKEN => Some(Sym::LEFT_END),
            RIGHT_END_TOKEN => Some(Sym::RIGHT_END),
            _ => self.alphabet.iter().position(|s| s == name).map(Sym::input),
        }
    }

    /// Canonically ordered options for `state` reading `reading`.
    pub fn options(&self, state: StateId, reading: &[Sym]) -> &[Move] {
        self.transitions
            .get(&state)
            .and_then(|row| row.get(reading))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Every non-empty transition set, in canonical key order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &[Sym], &[Move])> {
        self.transitions.iter().flat_map(|(q, row)| {
            row.iter()
                .map(move |(r, opts)| (*q, r.as_slice(), opts.as_slice()))
        })
    }

    /// Transition sets leaving `state`.
    pub fn transitions_from(&self, state: StateId) -> impl Iterator<Item = (&[Sym], &[Move])> {
        self.transitions
            .get(&state)
            .into_iter()
            .flat_map(|row| row.iter().map(|(r, opts)| (r.as_slice(), opts.as_slice())))
    }

    pub fn transition_count(&self) -> usize {
        self.transitions().map(|(_, _, opts)| opts.len()).sum()
    }

    /// Converts the machine back into a raw description in canonical order.
    pub fn to_raw(&self) -> RawAutomaton {
        let mut transitions = Vec::new();
        for (q, reading, opts) in self.transitions() {
            for mv in opts {
                transitions.push(RawTransition {
                    from: self.states[q].clone(),
                    reading: reading
                        .iter()
                        .map(|s| self.symbol_name(*s).to_string())
                        .collect(),
                    to: self.states[mv.target].clone(),
                    shifts: mv.shifts.iter().map(|&d| d as i64).collect(),
                });
            }
        }
        RawAutomaton {
            heads: self.heads,
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            accepting: self.states[self.accepting].clone(),
            transitions,
        }
    }

    /// Turns a word given as text into input symbols.
    ///
    /// When every input symbol is a single character the word is read one
    /// character at a time; otherwise symbols are separated by whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>, AutomatonError> {
        let single_chars = self.alphabet.iter().all(|s| s.chars().count() == 1);
        let lookup = |tok: &str| {
            self.alphabet
                .iter()
                .position(|s| s == tok)
                .map(Sym::input)
                .ok_or_else(|| AutomatonError::UnknownSymbol(tok.to_string()))
        };
        if single_chars {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| lookup(c.encode_utf8(&mut [0; 4])))
                .collect()
        } else {
            text.split_whitespace().map(lookup).collect()
        }
    }

    pub fn format_word(&self, word: &[Sym]) -> String {
        let single_chars = self.alphabet.iter().all(|s| s.chars().count() == 1);
        let names = word.iter().map(|s| self.symbol_name(*s));
        if single_chars {
            names.collect()
        } else {
            names.collect::<Vec<_>>().join(" ")
        }
    }

    /// True iff every transition set has at most one option.
    pub fn is_deterministic(&self) -> bool {
        self.transitions().all(|(_, _, opts)| opts.len() <= 1)
    }

    /// True iff no option moves any head left.
    pub fn is_one_way(&self) -> bool {
        self.transitions()
            .flat_map(|(_, _, opts)| opts)
            .all(|mv| mv.shifts.iter().all(|&d| d >= 0))
    }
}

/// The tape `⊢ w ⊣`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tape {
    cells: Vec<Sym>,
}

impl Tape {
    pub fn new(word: &[Sym]) -> Tape {
        let mut cells = Vec::with_capacity(word.len() + 2);
        cells.push(Sym::LEFT_END);
        cells.extend_from_slice(word);
        cells.push(Sym::RIGHT_END);
        Tape { cells }
    }

    /// Number of cells, n + 2.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, pos: usize) -> Option<Sym> {
        self.cells.get(pos).copied()
    }

    pub fn cells(&self) -> &[Sym] {
        &self.cells
    }

    /// Position reached by moving `shift` from `pos`, if it stays on the tape.
    pub fn step(&self, pos: usize, shift: i8) -> Option<usize> {
        let next = pos as i64 + shift as i64;
        (0..self.cells.len() as i64)
            .contains(&next)
            .then_some(next as usize)
    }

    pub fn read(&self, positions: &[usize]) -> Vec<Sym> {
        positions.iter().map(|&p| self.cells[p]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub positions: Vec<usize>,
}

impl Configuration {
    pub fn initial(a: &AutomatonSpec) -> Configuration {
        Configuration {
            state: a.initial,
            positions: vec![0; a.heads],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Successor {
    pub branch: usize,
    pub config: Configuration,
}

/// Successors of `c`, one per option that keeps every head on the tape.
pub fn successors(a: &AutomatonSpec, tape: &Tape, c: &Configuration) -> Vec<Successor> {
    let reading = tape.read(&c.positions);
    a.options(c.state, &reading)
        .iter()
        .enumerate()
        .filter_map(|(branch, mv)| {
            let positions = c
                .positions
                .iter()
                .zip(&mv.shifts)
                .map(|(&p, &d)| tape.step(p, d))
                .collect::<Option<Vec<_>>>()?;
            Some(Successor {
                branch,
                config: Configuration {
                    state: mv.target,
                    positions,
                },
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accept,
    Reject,
    Loop,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Accept => "accept",
            Outcome::Reject => "reject",
            Outcome::Loop => "loop",
        })
    }
}

/// An accepting path: each step is a configuration and the branch taken from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub steps: Vec<(Configuration, usize)>,
    pub accepting: Configuration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunVerdict {
    pub outcome: Outcome,
    pub explored_configurations: usize,
    pub witness: Option<Witness>,
}

pub fn decide_membership(a: &AutomatonSpec, word: &[Sym]) -> Result<RunVerdict, RunError> {
    decide_membership_capped(a, word, DEFAULT_CONFIGURATION_CAP)
}

/// Breadth-first search over the configuration graph.
///
/// Accept iff a configuration in the accepting state is reachable; otherwise
/// Loop iff the reachable graph has a cycle; otherwise Reject.
pub fn decide_membership_capped(
    a: &AutomatonSpec,
    word: &[Sym],
    cap: usize,
) -> Result<RunVerdict, RunError> {
    check_word(a, word)?;
    let tape = Tape::new(word);
    let start = Configuration::initial(a);
    if start.state == a.accepting {
        return Ok(RunVerdict {
            outcome: Outcome::Accept,
            explored_configurations: 1,
            witness: Some(Witness {
                steps: Vec::new(),
                accepting: start,
            }),
        });
    }

    let mut index: HashMap<Configuration, usize> = HashMap::new();
    let mut nodes: Vec<Configuration> = vec![start.clone()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut edges: Vec<Vec<usize>> = vec![Vec::new()];
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);

    while let Some(u) = queue.pop_front() {
        for succ in successors(a, &tape, &nodes[u]) {
            let v = match index.get(&succ.config) {
                Some(&v) => v,
                None => {
                    let v = nodes.len();
                    if v >= cap {
                        return Err(RunError::ResourceLimit { cap });
                    }
                    index.insert(succ.config.clone(), v);
                    nodes.push(succ.config.clone());
                    parent.push(Some((u, succ.branch)));
                    edges.push(Vec::new());
                    if succ.config.state == a.accepting {
                        let witness = rebuild_witness(&nodes, &parent, v);
                        return Ok(RunVerdict {
                            outcome: Outcome::Accept,
                            explored_configurations: nodes.len(),
                            witness: Some(witness),
                        });
                    }
                    queue.push_back(v);
                    v
                }
            };
            edges[u].push(v);
        }
    }

    let outcome = if has_cycle(&edges) {
        Outcome::Loop
    } else {
        Outcome::Reject
    };
    Ok(RunVerdict {
        outcome,
        explored_configurations: nodes.len(),
        witness: None,
    })
}

fn check_word(a: &AutomatonSpec, word: &[Sym]) -> Result<(), RunError> {
    match word
        .iter()
        .find(|s| s.input_index().is_none_or(|j| j >= a.alphabet.len()))
    {
        Some(s) => Err(RunError::InvalidWordSymbol(*s)),
        None => Ok(()),
    }
}

fn rebuild_witness(
    nodes: &[Configuration],
    parent: &[Option<(usize, usize)>],
    end: usize,
) -> Witness {
    let mut steps = Vec::new();
    let mut cur = end;
    while let Some((p, branch)) = parent[cur] {
        steps.push((nodes[p].clone(), branch));
        cur = p;
    }
    steps.reverse();
    Witness {
        steps,
        accepting: nodes[end].clone(),
    }
}

/// Kahn's algorithm: the graph has a cycle iff some node is never freed.
pub(crate) fn has_cycle(edges: &[Vec<usize>]) -> bool {
    let mut indegree = vec![0usize; edges.len()];
    for out in edges {
        for &v in out {
            indegree[v] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..edges.len()).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = ready.pop() {
        removed += 1;
        for &v in &edges[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    removed < edges.len()
}

/// Removes options that move a head left from ⊢ or right from ⊣.
pub fn clamp_endmarkers(a: &AutomatonSpec) -> AutomatonSpec {
    let mut out = a.clone();
    out.transitions = nest(
        a.transitions()
        .filter_map(|(q, reading, opts)| {
            let kept: Vec<Move> = opts
                .iter()
                .filter(|mv| {
                    reading.iter().zip(&mv.shifts).all(|(s, &d)| {
                        !(*s == Sym::LEFT_END && d < 0 || *s == Sym::RIGHT_END && d > 0)
                    })
                })
                .cloned()
                .collect();
            (!kept.is_empty()).then(|| ((q, reading.to_vec()), kept))
        })
        .collect(),
    );
    out
}

/// Builds a 2k-head machine for the same language whose every run halts.
///
/// Heads `k..2k` form a base-(n+2) odometer, one digit per head (the digit is
/// the head's position). The control keeps a phase in `0..|Q|`; each simulated
/// step advances the phase and every `|Q|` steps the odometer is incremented.
/// An increment walks digits from least significant upward: a digit below ⊣
/// moves one cell right, a digit on ⊣ rewinds to ⊢ and carries. Carrying out
/// of the last digit has no transition, so the branch rejects after
/// `|Q|·(n+2)^k` simulated steps, which exceeds the length of any shortest
/// accepting path.
///
/// State names: `q@p` simulates `q` in phase `p`, `q+cJ` carries into digit
/// `J`, `q<cJ` rewinds digit `J`. The accepting state keeps its name.
pub fn make_halting(a: &AutomatonSpec) -> AutomatonSpec {
    let k = a.heads;
    let q_count = a.states.len();
    if a.initial == a.accepting {
        return AutomatonSpec {
            heads: 2 * k,
            alphabet: a.alphabet.clone(),
            states: vec![a.states[a.initial].clone()],
            initial: 0,
            accepting: 0,
            transitions: Table::new(),
        };
    }

    let mut states: Vec<String> = Vec::new();
    let mut add = |name: String| {
        states.push(name);
        states.len() - 1
    };
    let accept = add(a.states[a.accepting].clone());
    let mut sim = vec![vec![usize::MAX; q_count]; q_count];
    let mut carry = vec![vec![usize::MAX; k]; q_count];
    let mut rewind = vec![vec![usize::MAX; k]; q_count];
    for q in 0..q_count {
        if q == a.accepting {
            continue;
        }
        let phases = if q == a.initial { 1 } else { q_count };
        for (p, slot) in sim[q].iter_mut().enumerate().take(phases) {
            *slot = add(format!("{}@{}", a.states[q], p));
        }
        if q != a.initial {
            for j in 0..k {
                carry[q][j] = add(format!("{}+c{}", a.states[q], j));
                rewind[q][j] = add(format!("{}<c{}", a.states[q], j));
            }
        }
    }
    let initial = sim[a.initial][0];

    let gamma: Vec<Sym> = a.gamma().collect();
    let all_tuples = |len: usize| tuples(&gamma, len);
    let counter_tuples = all_tuples(k);
    let mut transitions: BTreeMap<(StateId, Vec<Sym>), Vec<Move>> = BTreeMap::new();
    let still = vec![0i8; k];
    let unit = |j: usize, d: i8| {
        let mut v = vec![0i8; 2 * k];
        v[k + j] = d;
        v
    };

    for (q, reading, opts) in a.transitions() {
        if q == a.accepting {
            continue;
        }
        let phases = if q == a.initial { 1 } else { q_count };
        for p in 0..phases {
            let moves: Vec<Move> = opts
                .iter()
                .map(|mv| {
                    let target = if mv.target == a.accepting {
                        accept
                    } else if p + 1 < q_count {
                        sim[mv.target][p + 1]
                    } else {
                        carry[mv.target][0]
                    };
                    let mut shifts = mv.shifts.clone();
                    shifts.extend_from_slice(&still);
                    Move { target, shifts }
                })
                .collect();
            for counter in &counter_tuples {
                let mut key = reading.to_vec();
                key.extend_from_slice(counter);
                transitions.insert((sim[q][p], key), moves.clone());
            }
        }
    }

    for q in 0..q_count {
        if q == a.initial || q == a.accepting {
            continue;
        }
        for j in 0..k {
            for key in all_tuples(2 * k) {
                let digit = key[k + j];
                let carry_move = if digit == Sym::RIGHT_END {
                    Move {
                        target: rewind[q][j],
                        shifts: unit(j, -1),
                    }
                } else {
                    Move {
                        target: sim[q][0],
                        shifts: unit(j, 1),
                    }
                };
                transitions.insert((carry[q][j], key.clone()), vec![carry_move]);
                let rewind_move = if digit != Sym::LEFT_END {
                    Some(Move {
                        target: rewind[q][j],
                        shifts: unit(j, -1),
                    })
                } else if j + 1 < k {
                    Some(Move {
                        target: carry[q][j + 1],
                        shifts: vec![0; 2 * k],
                    })
                } else {
                    None
                };
                if let Some(mv) = rewind_move {
                    transitions.insert((rewind[q][j], key), vec![mv]);
                }
            }
        }
    }
    for opts in transitions.values_mut() {
        opts.sort();
    }

    AutomatonSpec {
        heads: 2 * k,
        alphabet: a.alphabet.clone(),
        states,
        initial,
        accepting: accept,
        transitions: nest(transitions),
    }
}

/// All tuples of length `len` over `symbols`, lexicographic.
pub(crate) fn tuples(symbols: &[Sym], len: usize) -> Vec<Vec<Sym>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                symbols.iter().map(move |&s| {
                    let mut t = prefix.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

/// Convenience builder for machines written in code.
///
/// Reading tokens may be `*` (any symbol of Γ) or `|`-separated alternatives
/// such as `a|b|$`; every combination becomes its own transition.
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    raw: RawAutomaton,
    patterns: Vec<(String, Vec<String>, String, Vec<i64>)>,
}

impl AutomatonBuilder {
    pub fn new(heads: usize, alphabet: &[&str], states: &[&str], initial: &str, accepting: &str) -> Self {
        AutomatonBuilder {
            raw: RawAutomaton {
                heads,
                alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
                states: states.iter().map(|s| s.to_string()).collect(),
                initial: initial.to_string(),
                accepting: accepting.to_string(),
                transitions: Vec::new(),
            },
            patterns: Vec::new(),
        }
    }

    pub fn trans(mut self, from: &str, reading: &[&str], to: &str, shifts: &[i64]) -> Self {
        self.patterns.push((
            from.to_string(),
            reading.iter().map(|s| s.to_string()).collect(),
            to.to_string(),
            shifts.to_vec(),
        ));
        self
    }

    pub fn build(mut self) -> Result<AutomatonSpec, AutomatonError> {
        let mut gamma: Vec<String> = vec![LEFT_END_TOKEN.into(), RIGHT_END_TOKEN.into()];
        gamma.extend(self.raw.alphabet.iter().cloned());
        for (from, reading, to, shifts) in std::mem::take(&mut self.patterns) {
            let choices: Vec<Vec<String>> = reading
                .iter()
                .map(|tok| {
                    if tok == "*" {
                        gamma.clone()
                    } else {
                        tok.split('|').map(str::to_string).collect()
                    }
                })
                .collect();
            let mut combos: Vec<Vec<String>> = vec![Vec::new()];
            for alts in &choices {
                combos = combos
                    .into_iter()
                    .flat_map(|prefix| {
                        alts.iter().map(move |s| {
                            let mut t = prefix.clone();
                            t.push(s.clone());
                            t
                        })
                    })
                    .collect();
            }
            for reading in combos {
                self.raw.transitions.push(RawTransition {
                    from: from.clone(),
                    reading,
                    to: to.clone(),
                    shifts: shifts.clone(),
                });
            }
        }
        validate(&self.raw)
    }
}
