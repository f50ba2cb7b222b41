//! Oracles shared by the integration tests. Everything here is written
//! directly from the definitions and does not call the search or
//! enumeration code it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use headwind::automaton::{validate, AutomatonSpec, RawAutomaton, RawTransition, StateId, Sym};
use headwind::multistep::ReadingProfile;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MICRO_GAMMA: [&str; 3] = ["^", "$", "a"];

fn cartesian<T: Clone>(items: &[T], len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// Every transition line over alphabet {a} with `states` states and `k` heads.
pub fn micro_entries(k: usize, states: usize) -> Vec<RawTransition> {
    let names = state_names(states);
    let readings = cartesian(&MICRO_GAMMA.map(String::from), k);
    let shifts = cartesian(&[-1i64, 0, 1], k);
    let mut out = Vec::new();
    for from in &names {
        for reading in &readings {
            for to in &names[1..] {
                for d in &shifts {
                    out.push(RawTransition {
                        from: from.clone(),
                        reading: reading.clone(),
                        to: to.clone(),
                        shifts: d.clone(),
                    });
                }
            }
        }
    }
    out
}

pub fn micro_machine(k: usize, states: usize, transitions: Vec<RawTransition>) -> AutomatonSpec {
    let names = state_names(states);
    validate(&RawAutomaton {
        heads: k,
        alphabet: vec!["a".into()],
        states: names.clone(),
        initial: names[0].clone(),
        accepting: names[states - 1].clone(),
        transitions,
    })
    .expect("micro machines are well formed")
}

fn subsets_up_to<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], start: usize, max: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i + 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, max, &mut Vec::new(), &mut out);
    out
}

/// All machines with the given shape and at most `max_entries` transition lines.
pub fn enumerate_family(k: usize, states: usize, max_entries: usize) -> Vec<AutomatonSpec> {
    let entries = micro_entries(k, states);
    subsets_up_to(&entries, max_entries)
        .into_iter()
        .map(|t| micro_machine(k, states, t))
        .collect()
}

/// A random machine with `k` heads, `states` states and `entries` lines.
pub fn random_machine(rng: &mut ChaCha8Rng, k: usize, states: usize, entries: usize) -> AutomatonSpec {
    let pool = micro_entries(k, states);
    let chosen: Vec<RawTransition> = pool.choose_multiple(rng, entries).cloned().collect();
    micro_machine(k, states, chosen)
}

/// The micro-suite over alphabet {a}: complete families for
/// (k=1, 2 states, ≤3 lines), (k=1, 3 states, ≤2 lines),
/// (k=2, 2 states, ≤2 lines), plus 2000 seeded machines with k=2,
/// 3 states and 2 or 3 lines.
pub fn micro_suite() -> Vec<AutomatonSpec> {
    let mut out = enumerate_family(1, 2, 3);
    out.extend(enumerate_family(1, 3, 2));
    out.extend(enumerate_family(2, 2, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d69_6372_6f);
    for i in 0..2000 {
        out.push(random_machine(&mut rng, 2, 3, 2 + i % 2));
    }
    out
}

/// Literal bounded windability: enumerates every computation of at most
/// `tmax + lmax` steps from the initial state, keeping only those whose
/// `head` readings agree at every revisited offset, and looks for a split
/// `T ≤ tmax`, `l ≤ lmax` at which the state repeats and the head's last `l`
/// movements sum to zero.
pub fn literal_windable(a: &AutomatonSpec, head: usize, tmax: usize, lmax: usize) -> bool {
    struct Walk<'a> {
        a: &'a AutomatonSpec,
        head: usize,
        tmax: usize,
        lmax: usize,
        states: Vec<StateId>,
        offsets: Vec<i64>,
        reads: HashMap<i64, Sym>,
    }
    impl Walk<'_> {
        fn found(&self) -> bool {
            let d = self.states.len() - 1;
            (1..=self.tmax).any(|t| {
                t < d && d - t <= self.lmax && self.states[t] == self.states[d] && self.offsets[t] == self.offsets[d]
            })
        }
        fn go(&mut self) -> bool {
            if self.found() {
                return true;
            }
            if self.states.len() - 1 == self.tmax + self.lmax {
                return false;
            }
            let q = *self.states.last().unwrap();
            let offset = *self.offsets.last().unwrap();
            let entries: Vec<(Vec<Sym>, Vec<(StateId, i8)>)> = self
                .a
                .transitions_from(q)
                .map(|(r, opts)| (r.to_vec(), opts.iter().map(|m| (m.target, m.shifts[self.head])).collect()))
                .collect();
            for (reading, opts) in entries {
                let sym = reading[self.head];
                let fresh = match self.reads.get(&offset) {
                    Some(&s) if s != sym => continue,
                    Some(_) => false,
                    None => true,
                };
                if fresh {
                    self.reads.insert(offset, sym);
                }
                for (target, d) in opts {
                    self.states.push(target);
                    self.offsets.push(offset + d as i64);
                    let hit = self.go();
                    self.states.pop();
                    self.offsets.pop();
                    if hit {
                        return true;
                    }
                }
                if fresh {
                    self.reads.remove(&offset);
                }
            }
            false
        }
    }
    Walk {
        a,
        head,
        tmax,
        lmax,
        states: vec![a.initial()],
        offsets: vec![0],
        reads: HashMap::new(),
    }
    .go()
}

/// Logs of `g.len()` steps from `q`, found by enumerating option paths one
/// at a time.
pub fn logs_by_paths(a: &AutomatonSpec, q: StateId, g: &ReadingProfile) -> (usize, BTreeSet<(StateId, Vec<Vec<i8>>)>) {
    fn go(
        a: &AutomatonSpec,
        g: &ReadingProfile,
        t: usize,
        q: StateId,
        hist: &mut Vec<Vec<i8>>,
        paths: &mut usize,
        out: &mut BTreeSet<(StateId, Vec<Vec<i8>>)>,
    ) {
        if t == g.len() {
            *paths += 1;
            out.insert((q, hist.clone()));
            return;
        }
        let reading: Vec<Sym> = (0..a.heads()).map(|h| g.row(h)[t]).collect();
        for mv in a.options(q, &reading) {
            for (h, d) in hist.iter_mut().zip(&mv.shifts) {
                h.push(*d);
            }
            go(a, g, t + 1, mv.target, hist, paths, out);
            for h in hist.iter_mut() {
                h.pop();
            }
        }
    }
    let mut paths = 0;
    let mut out = BTreeSet::new();
    go(a, g, 0, q, &mut vec![Vec::new(); a.heads()], &mut paths, &mut out);
    (paths, out)
}

/// A random profile of length `len`, biased towards readings that have
/// transitions so that most profiles produce logs.
pub fn random_profile(rng: &mut ChaCha8Rng, a: &AutomatonSpec, len: usize) -> ReadingProfile {
    let keys: Vec<Vec<Sym>> = a.transitions().map(|(_, r, _)| r.to_vec()).collect();
    let gamma: Vec<Sym> = a.gamma().collect();
    let columns: Vec<Vec<Sym>> = (0..len)
        .map(|_| {
            if !keys.is_empty() && rng.gen_bool(0.8) {
                keys.choose(rng).unwrap().clone()
            } else {
                (0..a.heads()).map(|_| *gamma.choose(rng).unwrap()).collect()
            }
        })
        .collect();
    ReadingProfile::from_columns(a.heads(), &columns)
}

/// Every word over `alphabet` of length at most `max_len`.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn count(w: &str, c: char) -> usize {
    w.chars().filter(|&x| x == c).count()
}

pub fn in_anbn(w: &str) -> bool {
    let n = count(w, 'a');
    w.len() == 2 * n && w == format!("{}{}", "a".repeat(n), "b".repeat(n))
}

pub fn in_a1(w: &str) -> bool {
    let n = w.len() / 4;
    w.len() % 4 == 0 && w == ["a", "b", "c", "d"].map(|c| c.repeat(n)).concat()
}

pub fn in_a2(w: &str) -> bool {
    count(w, 'a') == count(w, 'b') && count(w, 'b') == count(w, 'c')
}

/// u # v with v ∈ u1+ u2+ … un+, checked by splitting v into maximal runs.
pub fn in_a3(w: &str) -> bool {
    let Some((u, v)) = w.split_once('#') else {
        return false;
    };
    if v.contains('#') {
        return false;
    }
    // Runs of u must be covered by runs of v with the same letter, each v
    // run at least as long as the corresponding u run.
    let runs = |s: &str| {
        let mut out: Vec<(char, usize)> = Vec::new();
        for c in s.chars() {
            match out.last_mut() {
                Some((d, n)) if *d == c => *n += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    };
    let (ru, rv) = (runs(u), runs(v));
    ru.len() == rv.len() && ru.iter().zip(&rv).all(|((cu, nu), (cv, nv))| cu == cv && nv >= nu)
}

pub fn in_a4(w: &str) -> bool {
    count(w, 'a') * count(w, 'b') == count(w, 'c')
}

pub fn in_liar_gadget(w: &str) -> bool {
    let rest = w.trim_start_matches('a');
    rest.starts_with('b')
}

pub fn predicate_for(name: &str) -> Option<(fn(&str) -> bool, Vec<char>)> {
    Some(match name {
        "anbn" => (in_anbn as fn(&str) -> bool, vec!['a', 'b']),
        "a1" => (in_a1, vec!['a', 'b', 'c', 'd']),
        "a2" => (in_a2, vec!['a', 'b', 'c']),
        "a3" => (in_a3, vec!['a', 'b', '#']),
        "a4" => (in_a4, vec!['a', 'b', 'c']),
        "liar_gadget" => (in_liar_gadget, vec!['a', 'b']),
        "reliable_gadget" => (|_: &str| false, vec!['a', 'b']),
        _ => return None,
    })
}
