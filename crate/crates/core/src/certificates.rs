//! Certificates: the prover's one-way monologue.
//!
//! Each step claims the k symbols under the heads and the branch index taken
//! in the canonical option order of the claimed reading. A certificate is a
//! finite stem optionally followed by a cycle repeated forever.
//!
//! The verifier consumes one certificate stream across all of its rounds, so
//! certificates that should succeed in every round (honest ones and
//! false-accept lies) repeat the accepting route as their cycle.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::automaton::{decide_membership, AutomatonSpec, Outcome, RunError, StateId, Sym, Tape};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CertificateStep {
    pub claimed: Vec<Sym>,
    pub branch: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub stem: Vec<CertificateStep>,
    /// Repeated forever after the stem; empty for a finite certificate.
    pub cycle: Vec<CertificateStep>,
}

impl Certificate {
    pub fn finite(stem: Vec<CertificateStep>) -> Self {
        Certificate {
            stem,
            cycle: Vec::new(),
        }
    }

    pub fn lasso(stem: Vec<CertificateStep>, cycle: Vec<CertificateStep>) -> Self {
        Certificate { stem, cycle }
    }

    pub fn is_infinite(&self) -> bool {
        !self.cycle.is_empty()
    }

    pub fn stream(&self) -> Stream<'_> {
        Stream {
            cert: self,
            index: 0,
        }
    }

    /// The step at stream position `index`, if the stream is that long.
    pub fn step_at(&self, index: usize) -> Option<&CertificateStep> {
        if index < self.stem.len() {
            return self.stem.get(index);
        }
        if self.cycle.is_empty() {
            return None;
        }
        self.cycle.get((index - self.stem.len()) % self.cycle.len())
    }
}

/// Yields the stem, then the cycle forever.
#[derive(Clone, Debug)]
pub struct Stream<'a> {
    cert: &'a Certificate,
    index: usize,
}

impl<'a> Iterator for Stream<'a> {
    type Item = &'a CertificateStep;

    fn next(&mut self) -> Option<Self::Item> {
        let step = self.cert.step_at(self.index)?;
        self.index += 1;
        Some(step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LieKind {
    /// The lie leads the simulated machine into its accepting state.
    FalseAccept,
    /// The lie leads into a cycle that never reaches acceptance.
    Winding,
}

impl fmt::Display for LieKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LieKind::FalseAccept => "accept",
            LieKind::Winding => "winding",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryReport {
    pub lied_head: usize,
    pub kind: LieKind,
    /// Stream index of the first step whose claim about the lied head
    /// disagrees with the tape, or which moves that head off the tape.
    pub divergence_step: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("the word is accepted; adversarial certificates are only built for non-members")]
    MemberWord,
    #[error("head {head} does not exist (automaton has {heads} heads)")]
    HeadOutOfRange { head: usize, heads: usize },
    #[error(transparent)]
    Run(#[from] RunError),
}

/// Replays a shortest accepting path, repeated once per verifier round.
pub fn honest_certificate(a: &AutomatonSpec, word: &[Sym]) -> Result<Option<Certificate>, RunError> {
    let verdict = decide_membership(a, word)?;
    let Some(witness) = verdict.witness else {
        return Ok(None);
    };
    let tape = Tape::new(word);
    let route: Vec<CertificateStep> = witness
        .steps
        .iter()
        .map(|(config, branch)| CertificateStep {
            claimed: tape.read(&config.positions),
            branch: *branch,
        })
        .collect();
    Ok(Some(Certificate::lasso(Vec::new(), route)))
}

/// Position tracking for the lied-about head: exact until the first lie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Liar {
    At(usize),
    Lied,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ProductNode {
    state: StateId,
    /// Positions of all heads; the lied head's slot is unused.
    positions: Vec<usize>,
    liar: Liar,
}

struct ProductGraph {
    nodes: Vec<ProductNode>,
    edges: Vec<Vec<(usize, CertificateStep, bool)>>,
    parent: Vec<Option<(usize, usize)>>,
}

fn build_product(a: &AutomatonSpec, tape: &Tape, lied: usize, cap: usize) -> Result<ProductGraph, RunError> {
    let start = ProductNode {
        state: a.initial(),
        positions: vec![0; a.heads()],
        liar: Liar::At(0),
    };
    let mut graph = ProductGraph {
        nodes: vec![start.clone()],
        edges: vec![Vec::new()],
        parent: vec![None],
    };
    let mut index = HashMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let node = graph.nodes[u].clone();
        if node.state == a.accepting() {
            continue;
        }
        for (reading, opts) in a.transitions_from(node.state) {
            let truthful = reading
                .iter()
                .enumerate()
                .all(|(j, &s)| j == lied || tape.get(node.positions[j]) == Some(s));
            if !truthful {
                continue;
            }
            for (branch, mv) in opts.iter().enumerate() {
                let mut positions = node.positions.clone();
                let mut on_tape = true;
                for (j, &d) in mv.shifts.iter().enumerate() {
                    if j == lied {
                        continue;
                    }
                    match tape.step(positions[j], d) {
                        Some(p) => positions[j] = p,
                        None => on_tape = false,
                    }
                }
                if !on_tape {
                    continue;
                }
                let (liar, lie_here) = match node.liar {
                    Liar::Lied => (Liar::Lied, false),
                    Liar::At(p) => {
                        let honest_read = tape.get(p) == Some(reading[lied]);
                        match tape.step(p, mv.shifts[lied]).filter(|_| honest_read) {
                            Some(next) => (Liar::At(next), false),
                            None => (Liar::Lied, true),
                        }
                    }
                };
                let next = ProductNode {
                    state: mv.target,
                    positions,
                    liar,
                };
                let v = match index.get(&next) {
                    Some(&v) => v,
                    None => {
                        let v = graph.nodes.len();
                        if v >= cap {
                            return Err(RunError::ResourceLimit { cap });
                        }
                        index.insert(next.clone(), v);
                        graph.nodes.push(next);
                        graph.edges.push(Vec::new());
                        graph.parent.push(Some((u, graph.edges[u].len())));
                        queue.push_back(v);
                        v
                    }
                };
                let step = CertificateStep {
                    claimed: reading.to_vec(),
                    branch,
                };
                graph.edges[u].push((v, step, lie_here));
            }
        }
    }
    Ok(graph)
}

impl ProductGraph {
    /// Edges of the breadth-first tree path from the start to `v`.
    fn path_to(&self, mut v: usize) -> Vec<(CertificateStep, bool)> {
        let mut out = Vec::new();
        while let Some((u, e)) = self.parent[v] {
            let (_, step, lie) = &self.edges[u][e];
            out.push((step.clone(), *lie));
            v = u;
        }
        out.reverse();
        out
    }

    /// A cycle among lied nodes reachable from the start: returns the cycle
    /// entry node and the edges around the cycle.
    fn find_lied_cycle(&self, accepting: StateId) -> Option<(usize, Vec<CertificateStep>)> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let usable = |v: usize| self.nodes[v].liar == Liar::Lied && self.nodes[v].state != accepting;
        let mut mark = vec![Mark::New; self.nodes.len()];
        for root in 0..self.nodes.len() {
            if !usable(root) || mark[root] != Mark::New {
                continue;
            }
            // Stack of (node, edges tried); the last tried edge of each
            // stacked node leads to the node above it.
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            mark[root] = Mark::Active;
            while let Some(top) = stack.last_mut() {
                let u = top.0;
                if top.1 < self.edges[u].len() {
                    let e = top.1;
                    top.1 += 1;
                    let v = self.edges[u][e].0;
                    if !usable(v) {
                        continue;
                    }
                    match mark[v] {
                        Mark::New => {
                            mark[v] = Mark::Active;
                            stack.push((v, 0));
                        }
                        Mark::Active => {
                            let from = stack.iter().position(|&(n, _)| n == v).unwrap();
                            let cycle = stack[from..]
                                .iter()
                                .map(|&(n, taken)| self.edges[n][taken - 1].1.clone())
                                .collect();
                            return Some((v, cycle));
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[u] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Searches for a certificate that lies about `lied_head` alone.
///
/// Every other head's claims match the real tape at its true position, so a
/// verifier watching any other head never sees a mismatch. The lied head's
/// claims are free. Returns `None` when no such lie deceives the verifier.
pub fn adversary_certificate(
    a: &AutomatonSpec,
    word: &[Sym],
    lied_head: usize,
    prefer: LieKind,
) -> Result<Option<(Certificate, AdversaryReport)>, CertificateError> {
    adversary_certificate_capped(a, word, lied_head, prefer, crate::automaton::DEFAULT_CONFIGURATION_CAP)
}

pub fn adversary_certificate_capped(
    a: &AutomatonSpec,
    word: &[Sym],
    lied_head: usize,
    prefer: LieKind,
    cap: usize,
) -> Result<Option<(Certificate, AdversaryReport)>, CertificateError> {
    if lied_head >= a.heads() {
        return Err(CertificateError::HeadOutOfRange {
            head: lied_head,
            heads: a.heads(),
        });
    }
    if decide_membership(a, word)?.outcome == Outcome::Accept {
        return Err(CertificateError::MemberWord);
    }
    let tape = Tape::new(word);
    let graph = build_product(a, &tape, lied_head, cap)?;

    let false_accept = || {
        let target = (0..graph.nodes.len())
            .find(|&v| graph.nodes[v].state == a.accepting() && graph.nodes[v].liar == Liar::Lied)?;
        let path = graph.path_to(target);
        let divergence_step = path.iter().position(|(_, lie)| *lie)?;
        let route = path.into_iter().map(|(s, _)| s).collect();
        Some((
            Certificate::lasso(Vec::new(), route),
            AdversaryReport {
                lied_head,
                kind: LieKind::FalseAccept,
                divergence_step,
            },
        ))
    };
    let winding = || {
        let (entry, cycle) = graph.find_lied_cycle(a.accepting())?;
        let stem_path = graph.path_to(entry);
        let divergence_step = stem_path.iter().position(|(_, lie)| *lie)?;
        let stem = stem_path.into_iter().map(|(s, _)| s).collect();
        Some((
            Certificate::lasso(stem, cycle),
            AdversaryReport {
                lied_head,
                kind: LieKind::Winding,
                divergence_step,
            },
        ))
    };
    Ok(match prefer {
        LieKind::Winding => winding().or_else(false_accept),
        LieKind::FalseAccept => false_accept().or_else(winding),
    })
}
