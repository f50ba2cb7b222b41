//! Built-in automata: recognizers for four sample languages and small
//! gadgets with known head kinds and known single-head lies.

use crate::automaton::{decide_membership, AutomatonBuilder, AutomatonSpec, Outcome, Sym};
use crate::windability::HeadKind;

#[derive(Clone, Debug)]
pub struct ExampleEntry {
    pub name: &'static str,
    pub automaton: AutomatonSpec,
    pub language: &'static str,
    pub samples: Vec<(&'static str, Outcome)>,
    /// A non-member used for adversary experiments.
    pub designated_word: Vec<Sym>,
    /// Head kinds the construction guarantees, when it guarantees any.
    pub expected_kinds: Option<Vec<HeadKind>>,
    /// Upper bound on windable heads claimed achievable for the language.
    pub claimed_kw_bound: Option<usize>,
    /// Membership is checked exhaustively up to this word length.
    pub checked_length: usize,
}

impl ExampleEntry {
    fn new(
        name: &'static str,
        automaton: AutomatonSpec,
        language: &'static str,
        samples: Vec<(&'static str, Outcome)>,
        designated: &str,
        checked_length: usize,
    ) -> ExampleEntry {
        let designated_word = automaton.parse_word(designated).expect("designated word uses the alphabet");
        ExampleEntry {
            name,
            automaton,
            language,
            samples,
            designated_word,
            expected_kinds: None,
            claimed_kw_bound: None,
            checked_length,
        }
    }

    /// Sample words whose verdict differs from the recorded one.
    pub fn failing_samples(&self) -> Vec<&'static str> {
        self.samples
            .iter()
            .filter(|(w, expected)| {
                let word = self.automaton.parse_word(w).expect("sample uses the alphabet");
                decide_membership(&self.automaton, &word).map(|v| v.outcome) != Ok(*expected)
            })
            .map(|(w, _)| *w)
            .collect()
    }
}

use Outcome::{Accept, Reject};

/// {aⁿbⁿ}: head 2 skips the a block, then both heads advance together.
pub fn anbn() -> ExampleEntry {
    let a = AutomatonBuilder::new(2, &["a", "b"], &["q0", "skip", "match", "acc"], "q0", "acc")
        .trans("q0", &["^", "^"], "skip", &[1, 1])
        .trans("skip", &["a", "a"], "skip", &[0, 1])
        .trans("skip", &["a", "b"], "match", &[0, 0])
        .trans("skip", &["$", "$"], "acc", &[0, 0])
        .trans("match", &["a", "b"], "match", &[1, 1])
        .trans("match", &["b", "$"], "acc", &[0, 0])
        .build()
        .expect("anbn is well formed");
    ExampleEntry::new(
        "anbn",
        a,
        "a^n b^n, n >= 0",
        vec![("", Accept), ("ab", Accept), ("aabb", Accept), ("aab", Reject), ("ba", Reject), ("abab", Reject)],
        "aab",
        8,
    )
}

/// {aⁿbⁿcⁿdⁿ}: one-way and deterministic. Head 2 runs one block ahead of
/// head 1, so each block boundary of head 1 must coincide with the next
/// boundary of head 2.
pub fn a1() -> ExampleEntry {
    let a = AutomatonBuilder::new(2, &["a", "b", "c", "d"], &["s0", "skip", "ab", "bc", "cd", "acc"], "s0", "acc")
        .trans("s0", &["^", "^"], "skip", &[1, 1])
        .trans("skip", &["*", "a"], "skip", &[0, 1])
        .trans("skip", &["*", "b|c|d|$"], "ab", &[0, 0])
        .trans("ab", &["a", "b"], "ab", &[1, 1])
        .trans("ab", &["b", "c"], "bc", &[0, 0])
        .trans("ab", &["$", "$"], "acc", &[0, 0])
        .trans("bc", &["b", "c"], "bc", &[1, 1])
        .trans("bc", &["c", "d"], "cd", &[0, 0])
        .trans("cd", &["c", "d"], "cd", &[1, 1])
        .trans("cd", &["d", "$"], "acc", &[0, 0])
        .build()
        .expect("a1 is well formed");
    let mut e = ExampleEntry::new(
        "a1",
        a,
        "a^n b^n c^n d^n, n >= 0",
        vec![("aabbccdd", Accept), ("abcd", Accept), ("", Accept), ("aabbccd", Reject), ("abdc", Reject), ("aabbcd", Reject)],
        "aabbccd",
        8,
    );
    e.claimed_kw_bound = Some(0);
    e
}

/// Equal numbers of a, b and c. Head 2 is a counter: its offset from `^`
/// holds the number of a's, which is then counted down on each b, and
/// again on each c after recounting.
pub fn a2() -> ExampleEntry {
    let letter = "a|b|c|$";
    let a = AutomatonBuilder::new(
        2,
        &["a", "b", "c"],
        &["s0", "count_a", "rewind_a", "down_b", "rewind_b", "recount_a", "rewind_c", "down_c", "acc"],
        "s0",
        "acc",
    )
    .trans("s0", &["^", "^"], "count_a", &[1, 0])
    .trans("count_a", &["a", "*"], "count_a", &[1, 1])
    .trans("count_a", &["b|c", "*"], "count_a", &[1, 0])
    .trans("count_a", &["$", "*"], "rewind_a", &[-1, 0])
    .trans("rewind_a", &["a|b|c", "*"], "rewind_a", &[-1, 0])
    .trans("rewind_a", &["^", "*"], "down_b", &[1, 0])
    .trans("down_b", &["b", letter], "down_b", &[1, -1])
    .trans("down_b", &["a|c", "*"], "down_b", &[1, 0])
    .trans("down_b", &["$", "^"], "rewind_b", &[-1, 0])
    .trans("rewind_b", &["a|b|c", "^"], "rewind_b", &[-1, 0])
    .trans("rewind_b", &["^", "^"], "recount_a", &[1, 0])
    .trans("recount_a", &["a", "*"], "recount_a", &[1, 1])
    .trans("recount_a", &["b|c", "*"], "recount_a", &[1, 0])
    .trans("recount_a", &["$", "*"], "rewind_c", &[-1, 0])
    .trans("rewind_c", &["a|b|c", "*"], "rewind_c", &[-1, 0])
    .trans("rewind_c", &["^", "*"], "down_c", &[1, 0])
    .trans("down_c", &["c", letter], "down_c", &[1, -1])
    .trans("down_c", &["a|b", "*"], "down_c", &[1, 0])
    .trans("down_c", &["$", "^"], "acc", &[0, 0])
    .build()
    .expect("a2 is well formed");
    let mut e = ExampleEntry::new(
        "a2",
        a,
        "#a = #b = #c",
        vec![("abc", Accept), ("acb", Accept), ("", Accept), ("cbaabc", Accept), ("aabc", Reject), ("ab", Reject)],
        "aabc",
        6,
    );
    e.claimed_kw_bound = Some(0);
    e
}

/// {u # v : v ∈ u₁⁺u₂⁺…uₙ⁺} over u ∈ {a,b}*. Head 2 skips to `#` and then
/// moves right on every step; head 1 walks u and waits while head 2
/// consumes repeats of the last matched letter.
pub fn a3() -> ExampleEntry {
    let a = AutomatonBuilder::new(2, &["a", "b", "#"], &["s0", "find", "m_none", "m_a", "m_b", "acc"], "s0", "acc")
        .trans("s0", &["^", "^"], "find", &[1, 1])
        .trans("find", &["*", "a|b"], "find", &[0, 1])
        .trans("find", &["*", "#"], "m_none", &[0, 1])
        .trans("m_none", &["a", "a"], "m_a", &[1, 1])
        .trans("m_none", &["b", "b"], "m_b", &[1, 1])
        .trans("m_none", &["#", "$"], "acc", &[0, 0])
        .trans("m_a", &["a", "a"], "m_a", &[1, 1])
        .trans("m_a", &["b", "b"], "m_b", &[1, 1])
        .trans("m_a", &["b|#", "a"], "m_a", &[0, 1])
        .trans("m_a", &["#", "$"], "acc", &[0, 0])
        .trans("m_b", &["a", "a"], "m_a", &[1, 1])
        .trans("m_b", &["b", "b"], "m_b", &[1, 1])
        .trans("m_b", &["a|#", "b"], "m_b", &[0, 1])
        .trans("m_b", &["#", "$"], "acc", &[0, 0])
        .build()
        .expect("a3 is well formed");
    let mut e = ExampleEntry::new(
        "a3",
        a,
        "u # v with u over {a,b} and v in u1+ u2+ ... un+",
        vec![("ab#aabb", Accept), ("#", Accept), ("aa#aaa", Accept), ("ab#aba", Reject), ("aa#a", Reject), ("ab", Reject)],
        "ab#aba",
        8,
    );
    e.expected_kinds = Some(vec![HeadKind::Windable, HeadKind::Reliable]);
    e.claimed_kw_bound = Some(1);
    e
}

/// {w : #a · #b = #c}. For each a found by head 1, head 2 sweeps the word
/// and every b it passes moves head 3 to the next unused c. Afterwards no c
/// may remain to the right of head 3.
pub fn a4() -> ExampleEntry {
    let a = AutomatonBuilder::new(3, &["a", "b", "c"], &["s0", "outer", "inner", "seek", "rewind", "fin", "acc"], "s0", "acc")
        .trans("s0", &["^", "^", "^"], "outer", &[1, 0, 0])
        .trans("outer", &["a", "^", "*"], "inner", &[0, 1, 0])
        .trans("outer", &["b|c", "^", "*"], "outer", &[1, 0, 0])
        .trans("outer", &["$", "^", "*"], "fin", &[0, 0, 1])
        .trans("inner", &["a", "b", "*"], "seek", &[0, 1, 1])
        .trans("inner", &["a", "a|c", "*"], "inner", &[0, 1, 0])
        .trans("inner", &["a", "$", "*"], "rewind", &[0, -1, 0])
        .trans("seek", &["a", "*", "a|b"], "seek", &[0, 0, 1])
        .trans("seek", &["a", "*", "c"], "inner", &[0, 0, 0])
        .trans("rewind", &["a", "a|b|c", "*"], "rewind", &[0, -1, 0])
        .trans("rewind", &["a", "^", "*"], "outer", &[1, 0, 0])
        .trans("fin", &["$", "^", "a|b"], "fin", &[0, 0, 1])
        .trans("fin", &["$", "^", "$"], "acc", &[0, 0, 0])
        .build()
        .expect("a4 is well formed");
    ExampleEntry::new(
        "a4",
        a,
        "#a * #b = #c",
        vec![("abc", Accept), ("aabbcccc", Accept), ("", Accept), ("cab", Accept), ("acbc", Reject), ("aabbccc", Reject), ("ab", Reject)],
        "aabbccc",
        7,
    )
}

/// Head 1 stays on `^`; head 2 scans a's and accepts on a b. On the
/// designated word "a", a certificate can wind by claiming a's past the end
/// (a lie about head 2) or reach acceptance by claiming b under head 1.
pub fn liar_gadget() -> ExampleEntry {
    let a = AutomatonBuilder::new(2, &["a", "b"], &["q0", "q1", "qf"], "q0", "qf")
        .trans("q0", &["^", "^"], "q1", &[0, 1])
        .trans("q1", &["^", "a"], "q1", &[0, 1])
        .trans("q1", &["^", "b"], "qf", &[0, 1])
        .trans("q1", &["b", "a"], "qf", &[0, 1])
        .build()
        .expect("liar gadget is well formed");
    let mut e = ExampleEntry::new(
        "liar_gadget",
        a,
        "a* b (a|b)*",
        vec![("a", Reject), ("ab", Accept), ("b", Accept), ("", Reject), ("aa", Reject)],
        "a",
        6,
    );
    e.expected_kinds = Some(vec![HeadKind::Windable, HeadKind::Reliable]);
    e
}

/// Both heads move right together, so neither is windable and the language
/// is empty. On "aa" a certificate can claim b under head 2 and accept.
pub fn reliable_gadget() -> ExampleEntry {
    let a = AutomatonBuilder::new(2, &["a", "b"], &["q0", "q1", "qf"], "q0", "qf")
        .trans("q0", &["^", "^"], "q1", &[1, 1])
        .trans("q1", &["a", "a"], "q1", &[1, 1])
        .trans("q1", &["a", "b"], "qf", &[1, 1])
        .build()
        .expect("reliable gadget is well formed");
    let mut e = ExampleEntry::new(
        "reliable_gadget",
        a,
        "empty",
        vec![("aa", Reject), ("ab", Reject), ("", Reject)],
        "aa",
        6,
    );
    e.expected_kinds = Some(vec![HeadKind::Reliable, HeadKind::Reliable]);
    e
}

pub fn all() -> Vec<ExampleEntry> {
    vec![anbn(), a1(), a2(), a3(), a4(), liar_gadget(), reliable_gadget()]
}

pub fn by_name(name: &str) -> Option<ExampleEntry> {
    all().into_iter().find(|e| e.name == name)
}
