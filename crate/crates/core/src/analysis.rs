//! Exact error formulas for the verifiers, the reliable-side optimum, and a
//! scenario-tree enumeration that recomputes failure-to-reject without the
//! closed forms.
//!
//! Mix notation: `kw` windable and `kr` reliable heads, `ρr` the probability
//! of shadowing a reliable head, `ρw = 1 − ρr`, `pw = ρw/kw`, `pr = ρr/kr`,
//! `m` rounds.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::verifier::Variant;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("degenerate mix: {0}")]
    DegenerateMix(&'static str),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(String),
    #[error("rounds must be at least 1")]
    NoRounds,
    #[error("at least one head is required")]
    NoHeads,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow(base: &BigRational, m: u32) -> BigRational {
    num::pow::pow(base.clone(), m as usize)
}

fn max(a: BigRational, b: BigRational) -> BigRational {
    if a >= b {
        a
    } else {
        b
    }
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn decimal(r: &BigRational, places: u32) -> String {
    let scale = num::pow::pow(BigInt::from(10), places as usize);
    let scaled = r * BigRational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let magnitude = rounded.abs();
    let whole = &magnitude / &scale;
    let frac = &magnitude % &scale;
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac:0>width$}", frac = frac.to_string(), width = places as usize)
    }
}

/// `p/q (d.dddddd)`.
pub fn render(r: &BigRational) -> String {
    format!("{} ({})", r, decimal(r, 6))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixParameters {
    pub kw: usize,
    pub kr: usize,
    pub rho_r: BigRational,
    pub m: u32,
}

impl MixParameters {
    /// A mix with no reliable heads needs `ρr = 0`; one with no windable
    /// heads needs `ρr = 1`.
    pub fn new(kw: usize, kr: usize, rho_r: BigRational, m: u32) -> Result<Self, AnalysisError> {
        if kw + kr == 0 {
            return Err(AnalysisError::NoHeads);
        }
        if m == 0 {
            return Err(AnalysisError::NoRounds);
        }
        if rho_r.is_negative() || rho_r > BigRational::one() {
            return Err(AnalysisError::InvalidProbability(rho_r.to_string()));
        }
        if kr == 0 && !rho_r.is_zero() {
            return Err(AnalysisError::DegenerateMix("no reliable heads but rho_r > 0"));
        }
        if kw == 0 && !rho_r.is_one() {
            return Err(AnalysisError::DegenerateMix("no windable heads but rho_r < 1"));
        }
        Ok(MixParameters { kw, kr, rho_r, m })
    }

    pub fn k(&self) -> usize {
        self.kw + self.kr
    }

    pub fn rho_w(&self) -> BigRational {
        BigRational::one() - &self.rho_r
    }

    pub fn pw(&self) -> Result<BigRational, AnalysisError> {
        if self.kw == 0 {
            return Err(AnalysisError::DegenerateMix("pw needs kw >= 1"));
        }
        Ok(self.rho_w() / int(self.kw))
    }

    pub fn pr(&self) -> Result<BigRational, AnalysisError> {
        if self.kr == 0 {
            return Err(AnalysisError::DegenerateMix("pr needs kr >= 1"));
        }
        Ok(&self.rho_r / int(self.kr))
    }
}

/// FRw = 1 − (1 − ρr^m)/kw.
pub fn fr_windable(p: &MixParameters) -> Result<BigRational, AnalysisError> {
    if p.kw == 0 {
        return Err(AnalysisError::DegenerateMix("FRw needs kw >= 1"));
    }
    Ok(BigRational::one() - (BigRational::one() - pow(&p.rho_r, p.m)) / int(p.kw))
}

/// Σ_{i<m} ρr^i (ρw − pw) + ρr^m.
pub fn fr_windable_sum(p: &MixParameters) -> Result<BigRational, AnalysisError> {
    let step = p.rho_w() - p.pw()?;
    let mut total = BigRational::zero();
    for i in 0..p.m {
        total += pow(&p.rho_r, i) * &step;
    }
    Ok(total + pow(&p.rho_r, p.m))
}

/// FRr = ρw/(ρw+pr) + (1 − ρw/(ρw+pr))·(ρr − pr)^m.
pub fn fr_reliable(p: &MixParameters) -> Result<BigRational, AnalysisError> {
    let pr = p.pr()?;
    let rho_w = p.rho_w();
    let ratio = &rho_w / (&rho_w + &pr);
    let survive = pow(&(&p.rho_r - &pr), p.m);
    Ok(&ratio + (BigRational::one() - &ratio) * survive)
}

/// Σ_{i<m} (ρr − pr)^i ρw + (ρr − pr)^m.
pub fn fr_reliable_sum(p: &MixParameters) -> Result<BigRational, AnalysisError> {
    let base = &p.rho_r - p.pr()?;
    let rho_w = p.rho_w();
    let mut total = BigRational::zero();
    for i in 0..p.m {
        total += pow(&base, i) * &rho_w;
    }
    Ok(total + pow(&base, p.m))
}

/// max(FRw, FRr) over the head kinds present.
pub fn fr(p: &MixParameters) -> Result<BigRational, AnalysisError> {
    match (p.kw, p.kr) {
        (0, _) => fr_reliable(p),
        (_, 0) => fr_windable(p),
        _ => Ok(max(fr_windable(p)?, fr_reliable(p)?)),
    }
}

/// ρ_opt = kr/(k − 1).
pub fn rho_opt(kw: usize, kr: usize) -> Result<BigRational, AnalysisError> {
    if kw == 0 {
        return Err(AnalysisError::DegenerateMix("rho_opt needs kw >= 1"));
    }
    if kw + kr < 2 {
        return Err(AnalysisError::DegenerateMix("rho_opt needs k >= 2"));
    }
    Ok(int(kr) / int(kw + kr - 1))
}

/// 1 − 1/kw, and 0 when kw = 0.
pub fn optimal_fr(kw: usize) -> BigRational {
    if kw == 0 {
        BigRational::zero()
    } else {
        BigRational::one() - BigRational::one() / int(kw)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCurves {
    pub fr_windable_limit: BigRational,
    pub fr_reliable_limit: BigRational,
}

/// FRw* = 1 − 1/kw and FRr* = ρw/(ρw + pr).
pub fn limit_curves(p: &MixParameters) -> Result<LimitCurves, AnalysisError> {
    if p.kw == 0 || p.kr == 0 {
        return Err(AnalysisError::DegenerateMix("limit curves need kw, kr >= 1"));
    }
    let rho_w = p.rho_w();
    Ok(LimitCurves {
        fr_windable_limit: optimal_fr(p.kw),
        fr_reliable_limit: &rho_w / (&rho_w + p.pr()?),
    })
}

/// Numerator of d FRr*/dρr over a positive denominator: −pr − ρw/kr.
pub fn fr_reliable_limit_slope_numerator(p: &MixParameters) -> Result<BigRational, AnalysisError> {
    Ok(-p.pr()? - p.rho_w() / int(p.kr))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorBundle {
    pub false_rejection: BigRational,
    pub failure_to_reject: BigRational,
    pub false_acceptance: BigRational,
    /// Second false-acceptance figure where two are reported.
    pub alternative_false_acceptance: Option<BigRational>,
}

impl ErrorBundle {
    pub fn weak_error(&self) -> BigRational {
        max(self.false_rejection.clone(), self.false_acceptance.clone())
    }

    pub fn strong_error(&self) -> BigRational {
        max(self.false_rejection.clone(), self.failure_to_reject.clone())
    }
}

impl fmt::Display for ErrorBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "false_rejection = {}", render(&self.false_rejection))?;
        writeln!(f, "failure_to_reject = {}", render(&self.failure_to_reject))?;
        writeln!(f, "false_acceptance = {}", render(&self.false_acceptance))?;
        if let Some(alt) = &self.alternative_false_acceptance {
            writeln!(f, "false_acceptance_single_lie = {}", render(alt))?;
        }
        writeln!(f, "weak_error = {}", render(&self.weak_error()))?;
        write!(f, "strong_error = {}", render(&self.strong_error()))
    }
}

/// Probability that the upfront coin rejects: (c − 1)/(2c).
pub fn upfront_rejection(c: usize) -> BigRational {
    int(c - 1) / int(2 * c)
}

/// Probability that the upfront coin passes: (c + 1)/(2c).
pub fn upfront_pass(c: usize) -> BigRational {
    int(c + 1) / int(2 * c)
}

/// Error components of `variant`. V1 and V1' read only `k = kw + kr` and `m`.
pub fn verifier_error_bounds(variant: Variant, p: &MixParameters) -> Result<ErrorBundle, AnalysisError> {
    let k = p.k();
    let kf = int(k);
    Ok(match variant {
        Variant::V1 => ErrorBundle {
            false_rejection: BigRational::zero(),
            failure_to_reject: int(k - 1) / &kf,
            false_acceptance: pow(&(BigRational::one() / &kf), p.m),
            alternative_false_acceptance: Some(pow(&(int(k - 1) / &kf), p.m)),
        },
        Variant::V1Prime => {
            let pass = upfront_pass(k);
            ErrorBundle {
                false_rejection: upfront_rejection(k),
                failure_to_reject: &pass * (int(k - 1) / &kf),
                false_acceptance: &pass * pow(&(BigRational::one() / &kf), p.m),
                alternative_false_acceptance: Some(&pass * pow(&(int(k - 1) / &kf), p.m)),
            }
        }
        Variant::V2 => ErrorBundle {
            false_rejection: BigRational::zero(),
            failure_to_reject: fr(p)?,
            false_acceptance: v2_false_acceptance(p)?,
            alternative_false_acceptance: None,
        },
        Variant::V2Prime => {
            if p.kw == 0 {
                return Err(AnalysisError::DegenerateMix("V2' needs kw >= 1"));
            }
            let pass = upfront_pass(p.kw);
            ErrorBundle {
                false_rejection: upfront_rejection(p.kw),
                failure_to_reject: &pass * fr(p)?,
                false_acceptance: &pass * v2_false_acceptance(p)?,
                alternative_false_acceptance: None,
            }
        }
    })
}

/// max(ρr^m, (ρr − pr)^m) over the head kinds present.
fn v2_false_acceptance(p: &MixParameters) -> Result<BigRational, AnalysisError> {
    let lie_windable = pow(&p.rho_r, p.m);
    if p.kr == 0 {
        return Ok(lie_windable);
    }
    let lie_reliable = pow(&(&p.rho_r - p.pr()?), p.m);
    Ok(if p.kw == 0 {
        lie_reliable
    } else {
        max(lie_windable, lie_reliable)
    })
}

/// (k² − 1)/(2k²).
pub fn v1_prime_strong_error(k: usize) -> BigRational {
    int(k * k - 1) / int(2 * k * k)
}

/// 1/2 − 1/(2k), the other strong-error expression quoted for V1'.
pub fn v1_prime_strong_error_alternative(k: usize) -> BigRational {
    rational(1, 2) - BigRational::one() / int(2 * k)
}

/// Strong error of V2' at ρ_opt as m → ∞: max((kw−1)/(2kw), (kw+1)/(2kw)·(1 − 1/kw)).
pub fn v2_prime_limit_strong_error(kw: usize) -> Result<BigRational, AnalysisError> {
    if kw == 0 {
        return Err(AnalysisError::DegenerateMix("V2' needs kw >= 1"));
    }
    Ok(max(upfront_rejection(kw), upfront_pass(kw) * optimal_fr(kw)))
}

/// (kw² − 1)/(2kw²).
pub fn v2_prime_strong_error_closed(kw: usize) -> BigRational {
    int(kw * kw - 1) / int(2 * kw * kw)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiedHead {
    Windable,
    Reliable,
}

/// Probabilities of the three end results of an m-round scenario tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioOutcome {
    pub reject: BigRational,
    pub loop_forever: BigRational,
    pub accept: BigRational,
}

impl ScenarioOutcome {
    pub fn failure_to_reject(&self) -> BigRational {
        &self.loop_forever + &self.accept
    }
}

/// Enumerates the m-round tree one head at a time. The lied head is the
/// first head of its kind. Choosing it rejects, choosing another windable
/// head loops, choosing another reliable head starts the next round, and
/// surviving every round accepts.
pub fn scenario_tree(p: &MixParameters, lied: LiedHead) -> Result<ScenarioOutcome, AnalysisError> {
    let mut heads: Vec<(LiedHead, BigRational)> = Vec::new();
    for _ in 0..p.kw {
        heads.push((LiedHead::Windable, p.pw()?));
    }
    for _ in 0..p.kr {
        heads.push((LiedHead::Reliable, p.pr()?));
    }
    let lied_index = heads
        .iter()
        .position(|(kind, _)| *kind == lied)
        .ok_or(AnalysisError::DegenerateMix("no head of the lied kind"))?;
    let mut out = ScenarioOutcome {
        reject: BigRational::zero(),
        loop_forever: BigRational::zero(),
        accept: BigRational::zero(),
    };
    descend(&heads, lied_index, p.m, BigRational::one(), &mut out);
    Ok(out)
}

fn descend(heads: &[(LiedHead, BigRational)], lied: usize, rounds_left: u32, mass: BigRational, out: &mut ScenarioOutcome) {
    if rounds_left == 0 {
        out.accept += mass;
        return;
    }
    for (index, (kind, prob)) in heads.iter().enumerate() {
        let branch = &mass * prob;
        if branch.is_zero() {
            continue;
        }
        if index == lied {
            out.reject += branch;
        } else if *kind == LiedHead::Windable {
            out.loop_forever += branch;
        } else {
            descend(heads, lied, rounds_left - 1, branch, out);
        }
    }
}

pub fn scenario_tree_oracle(p: &MixParameters, lied: LiedHead) -> Result<BigRational, AnalysisError> {
    Ok(scenario_tree(p, lied)?.failure_to_reject())
}
