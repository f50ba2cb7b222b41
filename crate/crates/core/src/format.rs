//! Line-oriented text formats for automata and certificates.
//!
//! Automaton files hold the directives `heads K`, `alphabet s1 s2 …`,
//! `states q0 q1 …`, `initial q` and `accept q`, then any number of
//! `trans FROM sym1 … symK -> TO d1 … dK` lines with each `d` in {-1, 0, 1}.
//! Tokens are whitespace separated, `^` and `$` name the endmarkers, and a
//! line whose first non-blank character is `#` is a comment. Repeated
//! `trans` lines for the same state and reading add options.
//!
//! Certificate files hold one step per line, `sym1 … symK BRANCH`. A single
//! `@cycle` line separates the stem from the cycle repeated forever. Blank
//! lines are ignored; there are no comments, since `#` may be a symbol.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{validate, AutomatonError, AutomatonSpec, RawAutomaton, RawTransition};
use crate::certificates::{Certificate, CertificateStep};

pub const CYCLE_MARKER: &str = "@cycle";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("missing `{0}` directive")]
    Missing(&'static str),
    #[error(transparent)]
    Invalid(#[from] AutomatonError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

pub fn parse_automaton(text: &str) -> Result<AutomatonSpec, FormatError> {
    let mut heads: Option<usize> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut initial: Option<String> = None;
    let mut accepting: Option<String> = None;
    let mut transitions: Vec<(usize, RawTransition)> = Vec::new();

    for (index, line) in text.lines().enumerate() {
        let lineno = index + 1;
        let toks = tokens(line);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        if keyword.starts_with('#') {
            continue;
        }
        let args = &toks[1..];
        let once = |present: bool| {
            if present {
                Err(syntax(lineno, col, format!("duplicate `{keyword}` directive")))
            } else {
                Ok(())
            }
        };
        let single = || match args {
            [(_, value)] => Ok(value.to_string()),
            _ => Err(syntax(lineno, col, format!("`{keyword}` takes exactly one argument"))),
        };
        match keyword {
            "heads" => {
                once(heads.is_some())?;
                let value = single()?;
                let k = value
                    .parse::<usize>()
                    .map_err(|_| syntax(lineno, args[0].0, format!("`{value}` is not a head count")))?;
                heads = Some(k);
            }
            "alphabet" => {
                once(alphabet.is_some())?;
                alphabet = Some(args.iter().map(|(_, t)| t.to_string()).collect());
            }
            "states" => {
                once(states.is_some())?;
                if args.is_empty() {
                    return Err(syntax(lineno, col, "`states` needs at least one state"));
                }
                states = Some(args.iter().map(|(_, t)| t.to_string()).collect());
            }
            "initial" => {
                once(initial.is_some())?;
                initial = Some(single()?);
            }
            "accept" => {
                once(accepting.is_some())?;
                accepting = Some(single()?);
            }
            "trans" => {
                let arrow = args
                    .iter()
                    .position(|(_, t)| *t == "->")
                    .ok_or_else(|| syntax(lineno, col, "`trans` line needs `->`"))?;
                if arrow == 0 {
                    return Err(syntax(lineno, col, "`trans` line needs a source state"));
                }
                let (from, reading) = (&args[0], &args[1..arrow]);
                let rhs = &args[arrow + 1..];
                let Some((to, shifts)) = rhs.split_first() else {
                    return Err(syntax(lineno, args[arrow].0, "`->` must be followed by a target state"));
                };
                let shifts = shifts
                    .iter()
                    .map(|&(c, t)| {
                        t.parse::<i64>()
                            .map_err(|_| syntax(lineno, c, format!("`{t}` is not a movement")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                transitions.push((
                    lineno,
                    RawTransition {
                        from: from.1.to_string(),
                        reading: reading.iter().map(|(_, t)| t.to_string()).collect(),
                        to: to.1.to_string(),
                        shifts,
                    },
                ));
            }
            other => return Err(syntax(lineno, col, format!("unknown directive `{other}`"))),
        }
    }

    let heads = heads.ok_or(FormatError::Missing("heads"))?;
    for (lineno, t) in &transitions {
        if t.reading.len() != heads {
            return Err(syntax(*lineno, 1, format!("expected {heads} symbols before `->`, found {}", t.reading.len())));
        }
        if t.shifts.len() != heads {
            return Err(syntax(*lineno, 1, format!("expected {heads} movements after the target, found {}", t.shifts.len())));
        }
    }
    let raw = RawAutomaton {
        heads,
        alphabet: alphabet.ok_or(FormatError::Missing("alphabet"))?,
        states: states.ok_or(FormatError::Missing("states"))?,
        initial: initial.ok_or(FormatError::Missing("initial"))?,
        accepting: accepting.ok_or(FormatError::Missing("accept"))?,
        transitions: transitions.into_iter().map(|(_, t)| t).collect(),
    };
    Ok(validate(&raw)?)
}

/// Canonical text; parsing it gives back an equal automaton.
pub fn serialize_automaton(a: &AutomatonSpec) -> String {
    let raw = a.to_raw();
    let mut out = String::new();
    writeln!(out, "heads {}", raw.heads).unwrap();
    writeln!(out, "alphabet {}", raw.alphabet.join(" ")).unwrap();
    writeln!(out, "states {}", raw.states.join(" ")).unwrap();
    writeln!(out, "initial {}", raw.initial).unwrap();
    writeln!(out, "accept {}", raw.accepting).unwrap();
    for t in &raw.transitions {
        let shifts: Vec<String> = t.shifts.iter().map(i64::to_string).collect();
        writeln!(out, "trans {} {} -> {} {}", t.from, t.reading.join(" "), t.to, shifts.join(" ")).unwrap();
    }
    out
}

pub fn parse_certificate(text: &str, a: &AutomatonSpec) -> Result<Certificate, FormatError> {
    let k = a.heads();
    let mut stem = Vec::new();
    let mut cycle = Vec::new();
    let mut in_cycle = false;
    for (index, line) in text.lines().enumerate() {
        let lineno = index + 1;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if toks.len() == 1 && toks[0].1 == CYCLE_MARKER {
            if in_cycle {
                return Err(syntax(lineno, toks[0].0, "only one `@cycle` marker is allowed"));
            }
            in_cycle = true;
            continue;
        }
        if toks.len() != k + 1 {
            return Err(syntax(
                lineno,
                toks[0].0,
                format!("expected {k} symbols and a branch index, found {} tokens", toks.len()),
            ));
        }
        let claimed = toks[..k]
            .iter()
            .map(|&(c, t)| a.symbol(t).ok_or_else(|| syntax(lineno, c, format!("unknown symbol `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let (bc, bt) = toks[k];
        let branch = bt
            .parse::<usize>()
            .map_err(|_| syntax(lineno, bc, format!("`{bt}` is not a branch index")))?;
        let step = CertificateStep { claimed, branch };
        if in_cycle {
            cycle.push(step);
        } else {
            stem.push(step);
        }
    }
    if in_cycle && cycle.is_empty() {
        return Err(syntax(text.lines().count().max(1), 1, "`@cycle` must be followed by at least one step"));
    }
    Ok(Certificate { stem, cycle })
}

fn write_step(out: &mut String, step: &CertificateStep, a: &AutomatonSpec) {
    let names: Vec<&str> = step.claimed.iter().map(|s| a.symbol_name(*s)).collect();
    writeln!(out, "{} {}", names.join(" "), step.branch).unwrap();
}

pub fn serialize_certificate(c: &Certificate, a: &AutomatonSpec) -> String {
    let mut out = String::new();
    for step in &c.stem {
        write_step(&mut out, step, a);
    }
    if !c.cycle.is_empty() {
        writeln!(out, "{CYCLE_MARKER}").unwrap();
    }
    for step in &c.cycle {
        write_step(&mut out, step, a);
    }
    out
}
