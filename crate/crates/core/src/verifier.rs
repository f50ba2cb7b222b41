//! Interpreters for the V1, V1', V2 and V2' verification loops.
//!
//! The verifier has a single head of its own on `⊢ w ⊣` and an internal copy
//! of the automaton's control. Each round it rewinds, resets the simulated
//! state, picks one of the automaton's heads to shadow, then consumes
//! certificate steps until the simulated state accepts. A step is rejected
//! when the shadowed head's claimed symbol disagrees with the verifier's own
//! reading, or when the claimed branch does not exist.
//!
//! Coins come from a [`CoinSource`]. [`SeededCoins`] draws them from ChaCha8
//! seeded with the 64-bit seed, consuming each `u64` output least significant
//! bit first; this stream is fixed for a given release.
//!
//! Selecting uniformly among a count that is not a power of two re-flips the
//! selection block whenever the drawn value is out of range. The trace keeps
//! both the coins actually flipped and the closed-form budget.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automaton::{AutomatonSpec, Tape};
use crate::certificates::Certificate;
use crate::windability::HeadKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    V1,
    V1Prime,
    V2,
    V2Prime,
}

impl Variant {
    pub fn has_upfront_coin(self) -> bool {
        matches!(self, Variant::V1Prime | Variant::V2Prime)
    }

    pub fn is_biased(self) -> bool {
        matches!(self, Variant::V2 | Variant::V2Prime)
    }

    pub fn parse(text: &str) -> Option<Variant> {
        match text.to_ascii_lowercase().as_str() {
            "v1" => Some(Variant::V1),
            "v1p" | "v1'" => Some(Variant::V1Prime),
            "v2" => Some(Variant::V2),
            "v2p" | "v2'" => Some(Variant::V2Prime),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::V1 => "v1",
            Variant::V1Prime => "v1p",
            Variant::V2 => "v2",
            Variant::V2Prime => "v2p",
        })
    }
}

/// A probability `numerator / 2^bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: u64,
    bits: u32,
}

impl Dyadic {
    pub fn new(numerator: u64, bits: u32) -> Result<Dyadic, PolicyError> {
        if bits > 62 || numerator > (1u64 << bits) {
            return Err(PolicyError::InvalidProbability(format!("{numerator}/2^{bits}")));
        }
        Ok(Dyadic { numerator, bits })
    }

    pub fn zero() -> Dyadic {
        Dyadic { numerator: 0, bits: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { numerator: 1, bits: 0 }
    }

    /// Parses `P/Q` with `Q` a power of two; `B` is taken as log2 Q.
    pub fn parse(text: &str) -> Result<Dyadic, PolicyError> {
        let bad = || PolicyError::InvalidProbability(text.to_string());
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (text.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        if q == 0 || !q.is_power_of_two() {
            return Err(PolicyError::NotDyadic(text.to_string()));
        }
        if p > q {
            return Err(bad());
        }
        Dyadic::new(p, q.trailing_zeros())
    }

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Numerator when written with `bits` binary digits.
    pub fn scaled_numerator(self, bits: u32) -> Option<u64> {
        (bits >= self.bits && bits <= 62).then(|| self.numerator << (bits - self.bits))
    }

    pub fn complement(self) -> Dyadic {
        Dyadic {
            numerator: (1u64 << self.bits) - self.numerator,
            bits: self.bits,
        }
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.numerator), BigInt::from(1u64 << self.bits))
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / (1u64 << self.bits) as f64
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("`{0}` is not a probability")]
    InvalidProbability(String),
    #[error("`{0}`: probabilities used as coin thresholds must have a power-of-two denominator")]
    NotDyadic(String),
    #[error("rounds must be at least 1")]
    NoRounds,
    #[error("step cap must be at least 1")]
    NoStepCap,
    #[error("{0} needs at least one windable head")]
    NoWindableHeads(Variant),
    #[error("precision of {bits} bits cannot represent {value}")]
    Precision { bits: u32, value: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifierError {
    #[error("policy classifies {policy} heads but the automaton has {automaton}")]
    PolicyMismatch { policy: usize, automaton: usize },
}

/// Parameters of one verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifierPolicy {
    variant: Variant,
    rounds: u32,
    kinds: Vec<HeadKind>,
    rho_w: Dyadic,
    bits: u32,
    step_cap: Option<u64>,
}

impl VerifierPolicy {
    /// `kinds` classifies every head; it is ignored by V1/V1' except for its
    /// length. `rho_r` is the probability of shadowing a reliable head.
    pub fn new(variant: Variant, rounds: u32, kinds: Vec<HeadKind>, rho_r: Dyadic) -> Result<Self, PolicyError> {
        if rounds == 0 {
            return Err(PolicyError::NoRounds);
        }
        let policy = VerifierPolicy {
            variant,
            rounds,
            kinds,
            rho_w: rho_r.complement(),
            bits: rho_r.bits(),
            step_cap: None,
        };
        if variant == Variant::V2Prime && policy.windable_count() == 0 {
            return Err(PolicyError::NoWindableHeads(variant));
        }
        Ok(policy)
    }

    /// A V1/V1' policy over `heads` heads (classification unused).
    pub fn uniform(variant: Variant, rounds: u32, heads: usize) -> Result<Self, PolicyError> {
        VerifierPolicy::new(variant, rounds, vec![HeadKind::Reliable; heads], Dyadic::one())
    }

    /// Uses `bits` coins for the threshold instead of the minimum needed.
    pub fn with_bits(mut self, bits: u32) -> Result<Self, PolicyError> {
        if bits < self.rho_w.bits() || bits > 62 {
            return Err(PolicyError::Precision {
                bits,
                value: self.rho_w.to_string(),
            });
        }
        self.bits = bits;
        Ok(self)
    }

    pub fn with_step_cap(mut self, cap: u64) -> Result<Self, PolicyError> {
        if cap == 0 {
            return Err(PolicyError::NoStepCap);
        }
        self.step_cap = Some(cap);
        Ok(self)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn kinds(&self) -> &[HeadKind] {
        &self.kinds
    }

    pub fn heads(&self) -> usize {
        self.kinds.len()
    }

    pub fn windable_count(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == HeadKind::Windable).count()
    }

    pub fn reliable_count(&self) -> usize {
        self.kinds.len() - self.windable_count()
    }

    pub fn rho_w(&self) -> Dyadic {
        self.rho_w
    }

    pub fn rho_r(&self) -> Dyadic {
        self.rho_w.complement()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// True when V2-style biased branching is in effect (both head kinds present).
    pub fn uses_biased_choice(&self) -> bool {
        self.variant.is_biased() && self.windable_count() > 0 && self.reliable_count() > 0
    }

    /// The explicit cap, or 4·|Q|·(n+2)^(k+1) for this automaton and word length.
    pub fn step_cap_for(&self, a: &AutomatonSpec, word_len: usize) -> u64 {
        self.step_cap.unwrap_or_else(|| default_step_cap(a, word_len))
    }

    fn heads_of(&self, kind: HeadKind) -> Vec<usize> {
        (0..self.kinds.len()).filter(|&i| self.kinds[i] == kind).collect()
    }

    /// Head count deciding the upfront rejection probability.
    fn upfront_count(&self) -> usize {
        match self.variant {
            Variant::V2Prime => self.windable_count(),
            _ => self.heads(),
        }
    }
}

pub fn default_step_cap(a: &AutomatonSpec, word_len: usize) -> u64 {
    let cells = (word_len + 2) as u64;
    let mut cap = 4u64.saturating_mul(a.state_count() as u64);
    for _ in 0..=a.heads() {
        cap = cap.saturating_mul(cells);
    }
    cap.max(1)
}

/// ⌈log₂ n⌉, with 0 for n ≤ 1.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

pub trait CoinSource {
    fn flip(&mut self) -> bool;
}

/// Fair coins from ChaCha8 seeded with a 64-bit seed.
#[derive(Clone, Debug)]
pub struct SeededCoins {
    rng: ChaCha8Rng,
    buffer: u64,
    left: u32,
}

impl SeededCoins {
    pub fn new(seed: u64) -> Self {
        SeededCoins {
            rng: ChaCha8Rng::seed_from_u64(seed),
            buffer: 0,
            left: 0,
        }
    }
}

impl CoinSource for SeededCoins {
    fn flip(&mut self) -> bool {
        if self.left == 0 {
            self.buffer = self.rng.next_u64();
            self.left = 64;
        }
        let bit = self.buffer & 1 == 1;
        self.buffer >>= 1;
        self.left -= 1;
        bit
    }
}

/// Replays a fixed bit sequence; flips past its end return `false` and are
/// counted in [`ScriptedCoins::overrun`].
#[derive(Clone, Debug, Default)]
pub struct ScriptedCoins {
    bits: Vec<bool>,
    pos: usize,
    overrun: usize,
}

impl ScriptedCoins {
    pub fn new(bits: Vec<bool>) -> Self {
        ScriptedCoins {
            bits,
            pos: 0,
            overrun: 0,
        }
    }

    /// The `len` bits of `value`, most significant first.
    pub fn from_value(value: u64, len: u32) -> Self {
        ScriptedCoins::new((0..len).rev().map(|i| value >> i & 1 == 1).collect())
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }

    pub fn overrun(&self) -> usize {
        self.overrun
    }
}

impl CoinSource for ScriptedCoins {
    fn flip(&mut self) -> bool {
        match self.bits.get(self.pos) {
            Some(&b) => {
                self.pos += 1;
                b
            }
            None => {
                self.overrun += 1;
                false
            }
        }
    }
}

/// Counts flips made through it.
pub struct Counted<'a, C: CoinSource + ?Sized> {
    inner: &'a mut C,
    pub flips: u64,
}

impl<'a, C: CoinSource + ?Sized> Counted<'a, C> {
    pub fn new(inner: &'a mut C) -> Self {
        Counted { inner, flips: 0 }
    }
}

impl<C: CoinSource + ?Sized> CoinSource for Counted<'_, C> {
    fn flip(&mut self) -> bool {
        self.flips += 1;
        self.inner.flip()
    }
}

fn read_bits(coins: &mut impl CoinSource, len: u32) -> u64 {
    (0..len).fold(0u64, |acc, _| acc << 1 | coins.flip() as u64)
}

/// Uniform index below `n`: reads a block of `block` coins and uses its
/// first ⌈log₂ n⌉ bits, re-reading the whole block when out of range.
fn uniform_index(coins: &mut impl CoinSource, n: usize, block: u32) -> usize {
    let need = ceil_log2(n);
    debug_assert!(block >= need);
    loop {
        let raw = read_bits(coins, block);
        let value = (raw >> (block - need)) as usize;
        if value < n {
            return value;
        }
    }
}

/// Picks the head to shadow for one round.
pub fn choose_head(policy: &VerifierPolicy, coins: &mut impl CoinSource) -> usize {
    if !policy.uses_biased_choice() {
        let k = policy.heads();
        return uniform_index(coins, k, ceil_log2(k));
    }
    let windable = policy.heads_of(HeadKind::Windable);
    let reliable = policy.heads_of(HeadKind::Reliable);
    let bits = policy.bits;
    let threshold = policy
        .rho_w
        .scaled_numerator(bits)
        .expect("policy bits cover rho_w");
    let z = read_bits(coins, bits);
    let block = ceil_log2(windable.len().max(reliable.len()));
    let side = if z < threshold { &windable } else { &reliable };
    side[uniform_index(coins, side.len(), block)]
}

/// The upfront coin of V1'/V2': true means reject immediately.
///
/// Reads ⌈log₂ c⌉ + 1 coins as a value `v` (re-reading while `v ≥ 2c`) and
/// rejects iff `v < c − 1`, which has probability (c−1)/(2c). Here `c` is
/// k for V1' and kw for V2'.
pub fn upfront_reject(policy: &VerifierPolicy, coins: &mut impl CoinSource) -> bool {
    let c = policy.upfront_count() as u64;
    let len = ceil_log2(c as usize) + 1;
    loop {
        let v = read_bits(coins, len);
        if v < 2 * c {
            return v + 1 < c;
        }
    }
}

/// Closed-form coin counts, before any out-of-range re-flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoinBudget {
    pub upfront: u64,
    pub per_round: u64,
}

impl CoinBudget {
    pub fn total(&self, rounds: u64) -> u64 {
        self.upfront + self.per_round * rounds
    }
}

pub fn coin_budget(policy: &VerifierPolicy) -> CoinBudget {
    let upfront = if policy.variant.has_upfront_coin() {
        ceil_log2(policy.upfront_count()) as u64 + 1
    } else {
        0
    };
    let per_round = if policy.uses_biased_choice() {
        policy.bits as u64
            + ceil_log2(policy.windable_count().max(policy.reliable_count())) as u64
    } else {
        ceil_log2(policy.heads()) as u64
    };
    CoinBudget { upfront, per_round }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceOutcome {
    Accept,
    Reject,
    LoopCapped,
}

impl fmt::Display for TraceOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceOutcome::Accept => "accept",
            TraceOutcome::Reject => "reject",
            TraceOutcome::LoopCapped => "loop-capped",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectCause {
    Mismatch,
    InvalidTransition,
    UpfrontCoin,
    CertificateExhausted,
}

impl fmt::Display for RejectCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectCause::Mismatch => "mismatch",
            RejectCause::InvalidTransition => "invalid-transition",
            RejectCause::UpfrontCoin => "upfront-coin",
            RejectCause::CertificateExhausted => "certificate-exhausted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictTrace {
    pub outcome: TraceOutcome,
    pub rounds_completed: u32,
    /// Rounds in which a head was chosen.
    pub rounds_started: u32,
    pub coins_flipped: u64,
    pub coins_budgeted: u64,
    pub chosen_heads: Vec<usize>,
    pub reject_cause: Option<RejectCause>,
    /// Certificate stream index of the rejected step, for step-level rejections.
    pub reject_step: Option<usize>,
    pub steps_simulated: u64,
}

impl fmt::Display for VerdictTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "outcome = {}", self.outcome)?;
        writeln!(f, "rounds_completed = {}", self.rounds_completed)?;
        writeln!(f, "rounds_started = {}", self.rounds_started)?;
        let heads: Vec<String> = self.chosen_heads.iter().map(|h| (h + 1).to_string()).collect();
        writeln!(f, "chosen_heads = {}", heads.join(","))?;
        writeln!(f, "coins_flipped = {}", self.coins_flipped)?;
        writeln!(f, "coins_budgeted = {}", self.coins_budgeted)?;
        writeln!(f, "steps_simulated = {}", self.steps_simulated)?;
        match self.reject_cause {
            Some(cause) => writeln!(f, "reject_cause = {cause}")?,
            None => writeln!(f, "reject_cause = none")?,
        }
        match self.reject_step {
            Some(step) => writeln!(f, "reject_step = {step}"),
            None => writeln!(f, "reject_step = none"),
        }
    }
}

/// Runs one verification with coins from `seed`.
pub fn run_verifier(
    a: &AutomatonSpec,
    word: &[crate::automaton::Sym],
    cert: &Certificate,
    policy: &VerifierPolicy,
    seed: u64,
) -> Result<VerdictTrace, VerifierError> {
    run_verifier_with(a, word, cert, policy, &mut SeededCoins::new(seed))
}

pub fn run_verifier_with<C: CoinSource + ?Sized>(
    a: &AutomatonSpec,
    word: &[crate::automaton::Sym],
    cert: &Certificate,
    policy: &VerifierPolicy,
    coins: &mut C,
) -> Result<VerdictTrace, VerifierError> {
    if policy.heads() != a.heads() {
        return Err(VerifierError::PolicyMismatch {
            policy: policy.heads(),
            automaton: a.heads(),
        });
    }
    let tape = Tape::new(word);
    let budget = coin_budget(policy);
    let cap = policy.step_cap_for(a, word.len());
    let mut coins = Counted::new(coins);
    let mut trace = VerdictTrace {
        outcome: TraceOutcome::Accept,
        rounds_completed: 0,
        rounds_started: 0,
        coins_flipped: 0,
        coins_budgeted: budget.upfront,
        chosen_heads: Vec::new(),
        reject_cause: None,
        reject_step: None,
        steps_simulated: 0,
    };
    let finish = |mut trace: VerdictTrace, coins: &Counted<'_, C>, outcome, cause, step| {
        trace.outcome = outcome;
        trace.reject_cause = cause;
        trace.reject_step = step;
        trace.coins_flipped = coins.flips;
        trace
    };

    if policy.variant.has_upfront_coin() && upfront_reject(policy, &mut coins) {
        return Ok(finish(trace, &coins, TraceOutcome::Reject, Some(RejectCause::UpfrontCoin), None));
    }

    let mut stream_index = 0usize;
    for _ in 0..policy.rounds {
        let head = choose_head(policy, &mut coins);
        trace.chosen_heads.push(head);
        trace.rounds_started += 1;
        trace.coins_budgeted += budget.per_round;

        let mut pos = 0usize;
        let mut state = a.initial();
        let mut steps = 0u64;
        while state != a.accepting() {
            if steps >= cap {
                return Ok(finish(trace, &coins, TraceOutcome::LoopCapped, None, None));
            }
            let Some(step) = cert.step_at(stream_index) else {
                return Ok(finish(
                    trace,
                    &coins,
                    TraceOutcome::Reject,
                    Some(RejectCause::CertificateExhausted),
                    Some(stream_index),
                ));
            };
            let reject = |trace, cause| finish(trace, &coins, TraceOutcome::Reject, Some(cause), Some(stream_index));
            if step.claimed.len() != a.heads() {
                return Ok(reject(trace, RejectCause::InvalidTransition));
            }
            if tape.get(pos) != Some(step.claimed[head]) {
                return Ok(reject(trace, RejectCause::Mismatch));
            }
            let Some(mv) = a.options(state, &step.claimed).get(step.branch) else {
                return Ok(reject(trace, RejectCause::InvalidTransition));
            };
            let Some(next) = tape.step(pos, mv.shifts[head]) else {
                return Ok(reject(trace, RejectCause::InvalidTransition));
            };
            pos = next;
            state = mv.target;
            steps += 1;
            stream_index += 1;
            trace.steps_simulated += 1;
        }
        trace.rounds_completed += 1;
    }
    Ok(finish(trace, &coins, TraceOutcome::Accept, None, None))
}

/// Exact probability, over the head-choice coins, that each head is chosen.
///
/// Enumerates every bit string of the closed-form per-round budget. Exact
/// only when no re-flip can occur (all side counts powers of two).
pub fn head_choice_distribution(policy: &VerifierPolicy) -> Vec<BigRational> {
    let per_round = coin_budget(policy).per_round as u32;
    let mut counts = vec![0u64; policy.heads()];
    for value in 0..(1u64 << per_round) {
        let mut coins = ScriptedCoins::from_value(value, per_round);
        counts[choose_head(policy, &mut coins)] += 1;
    }
    let total = BigInt::from(1u64 << per_round);
    counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), total.clone()))
        .collect()
}

/// Exact upfront rejection probability by enumeration of its coin block.
pub fn upfront_reject_probability(policy: &VerifierPolicy) -> BigRational {
    let len = coin_budget(policy).upfront as u32;
    if len == 0 {
        return BigRational::zero();
    }
    let c = policy.upfront_count() as u64;
    let mut rejects = 0u64;
    let mut valid = 0u64;
    for value in 0..(1u64 << len) {
        if value >= 2 * c {
            continue;
        }
        valid += 1;
        let mut coins = ScriptedCoins::from_value(value, len);
        if upfront_reject(policy, &mut coins) {
            rejects += 1;
        }
    }
    if valid == 0 {
        return BigRational::one();
    }
    BigRational::new(BigInt::from(rejects), BigInt::from(valid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{adversary_certificate, honest_certificate, LieKind};
    use crate::examples;
    use HeadKind::{Reliable, Windable};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(
            (1..=9).map(ceil_log2).collect::<Vec<_>>(),
            vec![0, 1, 2, 2, 3, 3, 3, 3, 4]
        );
    }

    #[test]
    fn threshold_bitstrings() {
        // rho_w = 1/4 with B = 2: only 00 goes to the windable side.
        let policy = VerifierPolicy::new(Variant::V2, 1, vec![Windable, Reliable], Dyadic::parse("3/4").unwrap()).unwrap();
        let picks: Vec<usize> = (0..4)
            .map(|v| choose_head(&policy, &mut ScriptedCoins::from_value(v, 2)))
            .collect();
        assert_eq!(picks, vec![0, 1, 1, 1]);
    }

    #[test]
    fn single_windable_head_needs_no_selection_coins() {
        let policy = VerifierPolicy::new(Variant::V2, 1, vec![Reliable, Windable], Dyadic::parse("0/1").unwrap()).unwrap();
        let mut coins = ScriptedCoins::new(vec![]);
        assert_eq!(choose_head(&policy, &mut coins), 1);
        assert_eq!(coins.consumed(), 0);
    }

    #[test]
    fn uniform_choice_over_four_heads() {
        let policy = VerifierPolicy::uniform(Variant::V1, 1, 4).unwrap();
        assert_eq!(head_choice_distribution(&policy), vec![rat(1, 4); 4]);
        assert_eq!(coin_budget(&policy).per_round, 2);
    }

    #[test]
    fn non_power_of_two_choice_is_uniform() {
        let policy = VerifierPolicy::uniform(Variant::V1, 1, 3).unwrap();
        // Values 00, 01, 10 select heads; 11 re-flips.
        let mut coins = ScriptedCoins::new(vec![true, true, true, false]);
        assert_eq!(choose_head(&policy, &mut coins), 2);
        assert_eq!(coins.consumed(), 4);
    }

    #[test]
    fn biased_distribution_is_exact() {
        let kinds = vec![Windable, Windable, Reliable, Reliable];
        let policy = VerifierPolicy::new(Variant::V2, 1, kinds, Dyadic::parse("3/4").unwrap()).unwrap();
        assert_eq!(
            head_choice_distribution(&policy),
            vec![rat(1, 8), rat(1, 8), rat(3, 8), rat(3, 8)]
        );
    }

    #[test]
    fn upfront_probabilities() {
        let two = VerifierPolicy::new(Variant::V2Prime, 1, vec![Windable, Windable, Reliable], Dyadic::parse("1/2").unwrap()).unwrap();
        assert_eq!(upfront_reject_probability(&two), rat(1, 4));
        let rejects: Vec<bool> = (0..4)
            .map(|v| upfront_reject(&two, &mut ScriptedCoins::from_value(v, 2)))
            .collect();
        assert_eq!(rejects, vec![true, false, false, false]);
        let one = VerifierPolicy::new(Variant::V2Prime, 1, vec![Windable, Reliable], Dyadic::parse("1/2").unwrap()).unwrap();
        assert_eq!(upfront_reject_probability(&one), rat(0, 1));
        let v1p = VerifierPolicy::uniform(Variant::V1Prime, 1, 2).unwrap();
        assert_eq!(upfront_reject_probability(&v1p), rat(1, 4));
        let v1p3 = VerifierPolicy::uniform(Variant::V1Prime, 1, 3).unwrap();
        assert_eq!(upfront_reject_probability(&v1p3), rat(1, 3));
    }

    #[test]
    fn budgets() {
        let kinds = vec![Windable, Windable, Reliable, Reliable];
        let v2 = VerifierPolicy::new(Variant::V2, 1, kinds.clone(), Dyadic::parse("1/4").unwrap()).unwrap();
        assert_eq!(coin_budget(&v2), CoinBudget { upfront: 0, per_round: 3 });
        let v2p = VerifierPolicy::new(Variant::V2Prime, 1, kinds, Dyadic::parse("1/4").unwrap()).unwrap();
        assert_eq!(coin_budget(&v2p), CoinBudget { upfront: 2, per_round: 3 });
        let v1 = VerifierPolicy::uniform(Variant::V1, 1, 4).unwrap();
        assert_eq!(coin_budget(&v1), CoinBudget { upfront: 0, per_round: 2 });
    }

    #[test]
    fn dyadic_parsing() {
        assert_eq!(Dyadic::parse("3/8").unwrap().bits(), 3);
        assert!(matches!(Dyadic::parse("1/3"), Err(PolicyError::NotDyadic(_))));
        assert!(Dyadic::parse("5/4").is_err());
        assert_eq!(Dyadic::parse("1").unwrap(), Dyadic::one());
    }

    #[test]
    fn honest_v1_accepts_with_closed_form_coins() {
        let a = examples::anbn().automaton;
        let w = a.parse_word("aabb").unwrap();
        let cert = honest_certificate(&a, &w).unwrap().unwrap();
        let policy = VerifierPolicy::uniform(Variant::V1, 5, 2).unwrap();
        for seed in 0..50 {
            let t = run_verifier(&a, &w, &cert, &policy, seed).unwrap();
            assert_eq!(t.outcome, TraceOutcome::Accept);
            assert_eq!(t.coins_flipped, 5);
            assert_eq!(t.coins_budgeted, 5);
        }
    }

    #[test]
    fn winding_lie_detected_or_loops() {
        let g = examples::liar_gadget();
        let (a, w) = (&g.automaton, &g.designated_word);
        let (cert, report) = adversary_certificate(a, w, 1, LieKind::Winding).unwrap().unwrap();
        let policy = VerifierPolicy::new(Variant::V2, 3, vec![Windable, Reliable], Dyadic::parse("1/2").unwrap()).unwrap();
        // One threshold coin: 0 chooses the windable head 0, 1 chooses head 1.
        let lied = run_verifier_with(a, w, &cert, &policy, &mut ScriptedCoins::new(vec![true])).unwrap();
        assert_eq!(lied.outcome, TraceOutcome::Reject);
        assert_eq!(lied.reject_cause, Some(RejectCause::Mismatch));
        assert_eq!(lied.reject_step, Some(report.divergence_step));
        let truthful = run_verifier_with(a, w, &cert, &policy, &mut ScriptedCoins::new(vec![false])).unwrap();
        assert_eq!(truthful.outcome, TraceOutcome::LoopCapped);
    }

    #[test]
    fn exhausted_certificate_rejects() {
        let a = examples::anbn().automaton;
        let w = a.parse_word("ab").unwrap();
        let honest = honest_certificate(&a, &w).unwrap().unwrap();
        let once = Certificate::finite(honest.cycle.clone());
        let policy = VerifierPolicy::uniform(Variant::V1, 2, 2).unwrap();
        let t = run_verifier(&a, &w, &once, &policy, 1).unwrap();
        assert_eq!(t.outcome, TraceOutcome::Reject);
        assert_eq!(t.reject_cause, Some(RejectCause::CertificateExhausted));
        assert_eq!(t.rounds_completed, 1);
    }

    #[test]
    fn policy_mismatch() {
        let a = examples::anbn().automaton;
        let policy = VerifierPolicy::uniform(Variant::V1, 1, 3).unwrap();
        assert!(matches!(
            run_verifier(&a, &[], &Certificate::default(), &policy, 0),
            Err(VerifierError::PolicyMismatch { .. })
        ));
    }
}
