//! Seeded Monte Carlo estimates of verifier error components.
//!
//! Trial `i` (0-based) of a plan with base seed `s` uses the coin seed
//! `splitmix64(s + (i + 1)·0x9E3779B97F4A7C15)` (wrapping). The map from
//! trial index to seed is injective and independent of scheduling, so
//! results do not depend on the number of worker threads. Setting
//! `HEADWIND_THREADS` caps the worker count.
//!
//! Intervals are normal approximations at 3σ around the empirical rate,
//! widened to at least ±0.01 when fewer than 10 000 trials are run.

use std::io;

use num::{BigInt, BigRational};
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{self, decimal, AnalysisError, MixParameters};
use crate::automaton::{AutomatonSpec, RunError, Sym};
use crate::certificates::{adversary_certificate, honest_certificate, AdversaryReport, Certificate, CertificateError, LieKind};
use crate::verifier::{run_verifier, Dyadic, PolicyError, TraceOutcome, Variant, VerifierError, VerifierPolicy};
use crate::windability::HeadKind;

pub const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
pub const SMALL_SAMPLE: u64 = 10_000;
pub const SMALL_SAMPLE_FLOOR: f64 = 0.01;
pub const SIGMAS: f64 = 3.0;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(SEED_STRIDE);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(base: u64, trial: u64) -> u64 {
    splitmix64(base.wrapping_add(trial.wrapping_add(1).wrapping_mul(SEED_STRIDE)))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("no single-head lie about head {head} deceives the verifier on this word")]
    AdversaryUnavailable { head: usize },
    #[error("the word is not accepted, so no honest certificate exists")]
    NoHonestCertificate,
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Verifier(#[from] VerifierError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateSource {
    Honest,
    Adversary { lied_head: usize, prefer: LieKind },
    /// Every single-head lie; the estimate with the largest failure to reject is kept.
    WorstCase,
    Fixed(Certificate),
}

#[derive(Clone, Debug)]
pub struct ExperimentPlan<'a> {
    pub automaton: &'a AutomatonSpec,
    pub word: Vec<Sym>,
    pub policy: VerifierPolicy,
    pub source: CertificateSource,
    pub trials: u64,
    pub base_seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EstimateRow {
    pub trials: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub loop_capped: u64,
    pub coins_flipped: u64,
    pub coins_budgeted: u64,
    /// Traces whose flipped coins differ from the closed-form budget.
    pub coin_mismatches: u64,
    pub adversary: Option<AdversaryReport>,
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl EstimateRow {
    pub fn accept_rate(&self) -> BigRational {
        ratio(self.accepts, self.trials)
    }

    pub fn reject_rate(&self) -> BigRational {
        ratio(self.rejects, self.trials)
    }

    pub fn loopcapped_rate(&self) -> BigRational {
        ratio(self.loop_capped, self.trials)
    }

    pub fn failure_to_reject(&self) -> BigRational {
        ratio(self.accepts + self.loop_capped, self.trials)
    }

    pub fn false_acceptance(&self) -> BigRational {
        self.accept_rate()
    }

    /// 3σ half-width for a rate estimated from `count` successes.
    pub fn half_width_of(&self, count: u64) -> f64 {
        let n = self.trials as f64;
        let p = count as f64 / n;
        let w = SIGMAS * (p * (1.0 - p) / n).sqrt();
        if self.trials < SMALL_SAMPLE {
            w.max(SMALL_SAMPLE_FLOOR)
        } else {
            w
        }
    }

    pub fn failure_half_width(&self) -> f64 {
        self.half_width_of(self.accepts + self.loop_capped)
    }

    /// True when `value` lies in the failure-to-reject interval.
    pub fn failure_interval_contains(&self, value: &BigRational) -> bool {
        let estimate = to_f64(&self.failure_to_reject());
        (estimate - to_f64(value)).abs() <= self.failure_half_width() + 1e-12
    }

    pub fn mean_coins(&self) -> f64 {
        self.coins_flipped as f64 / self.trials as f64
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    decimal(r, 15).parse().expect("decimal rendering parses")
}

fn with_pool<T: Send>(job: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("HEADWIND_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(job),
        None => job(),
    }
}

/// Certificates a source stands for, with the lie each one tells.
pub fn resolve_source(
    a: &AutomatonSpec,
    word: &[Sym],
    source: &CertificateSource,
) -> Result<Vec<(Certificate, Option<AdversaryReport>)>, ExperimentError> {
    match source {
        CertificateSource::Honest => {
            let cert = honest_certificate(a, word)?.ok_or(ExperimentError::NoHonestCertificate)?;
            Ok(vec![(cert, None)])
        }
        CertificateSource::Adversary { lied_head, prefer } => {
            let (cert, report) = adversary_certificate(a, word, *lied_head, *prefer)?
                .ok_or(ExperimentError::AdversaryUnavailable { head: *lied_head })?;
            Ok(vec![(cert, Some(report))])
        }
        CertificateSource::WorstCase => {
            let mut out: Vec<(Certificate, Option<AdversaryReport>)> = Vec::new();
            for head in 0..a.heads() {
                for prefer in [LieKind::Winding, LieKind::FalseAccept] {
                    if let Some((cert, report)) = adversary_certificate(a, word, head, prefer)? {
                        if !out.iter().any(|(c, _)| *c == cert) {
                            out.push((cert, Some(report)));
                        }
                    }
                }
            }
            if out.is_empty() {
                return Err(ExperimentError::AdversaryUnavailable { head: 0 });
            }
            Ok(out)
        }
        CertificateSource::Fixed(cert) => Ok(vec![(cert.clone(), None)]),
    }
}

/// Runs `trials` verifications of one certificate.
pub fn estimate_certificate(
    a: &AutomatonSpec,
    word: &[Sym],
    cert: &Certificate,
    policy: &VerifierPolicy,
    trials: u64,
    base_seed: u64,
) -> Result<EstimateRow, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let zero = EstimateRow::default();
    let merge = |mut x: EstimateRow, y: EstimateRow| {
        x.trials += y.trials;
        x.accepts += y.accepts;
        x.rejects += y.rejects;
        x.loop_capped += y.loop_capped;
        x.coins_flipped += y.coins_flipped;
        x.coins_budgeted += y.coins_budgeted;
        x.coin_mismatches += y.coin_mismatches;
        x
    };
    let row = with_pool(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let trace = run_verifier(a, word, cert, policy, trial_seed(base_seed, i))?;
                let mut row = zero.clone();
                row.trials = 1;
                match trace.outcome {
                    TraceOutcome::Accept => row.accepts = 1,
                    TraceOutcome::Reject => row.rejects = 1,
                    TraceOutcome::LoopCapped => row.loop_capped = 1,
                }
                row.coins_flipped = trace.coins_flipped;
                row.coins_budgeted = trace.coins_budgeted;
                row.coin_mismatches = (trace.coins_flipped != trace.coins_budgeted) as u64;
                Ok::<_, VerifierError>(row)
            })
            .try_reduce(|| zero.clone(), |x, y| Ok(merge(x, y)))
    })?;
    Ok(row)
}

pub fn estimate(plan: &ExperimentPlan<'_>) -> Result<EstimateRow, ExperimentError> {
    let mut best: Option<EstimateRow> = None;
    for (cert, report) in resolve_source(plan.automaton, &plan.word, &plan.source)? {
        let mut row = estimate_certificate(plan.automaton, &plan.word, &cert, &plan.policy, plan.trials, plan.base_seed)?;
        row.adversary = report;
        let better = best
            .as_ref()
            .map_or(true, |b| row.failure_to_reject() > b.failure_to_reject());
        if better {
            best = Some(row);
        }
    }
    Ok(best.expect("resolve_source returns at least one certificate"))
}

/// The probability of shadowing a reliable head that the verifier realises.
/// Without both head kinds the choice is uniform, giving kr/k.
pub fn effective_rho_r(policy: &VerifierPolicy) -> BigRational {
    if policy.uses_biased_choice() {
        policy.rho_r().to_rational()
    } else {
        ratio(policy.reliable_count() as u64, policy.heads() as u64)
    }
}

/// Worst-case failure to reject under single-head lies for this policy.
pub fn analytic_failure_to_reject(policy: &VerifierPolicy) -> Result<BigRational, ExperimentError> {
    let mix = MixParameters::new(
        policy.windable_count(),
        policy.reliable_count(),
        effective_rho_r(policy),
        policy.rounds(),
    )?;
    let fr = analysis::fr(&mix)?;
    Ok(match policy.variant() {
        Variant::V1 | Variant::V2 => fr,
        Variant::V1Prime => analysis::upfront_pass(policy.heads()) * fr,
        Variant::V2Prime => analysis::upfront_pass(policy.windable_count()) * fr,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub variant: Variant,
    pub rho_r: Dyadic,
    pub rounds: u32,
}

#[derive(Clone, Debug)]
pub struct SweepSetup<'a> {
    pub automaton: &'a AutomatonSpec,
    pub word: Vec<Sym>,
    pub kinds: Vec<HeadKind>,
    pub source: CertificateSource,
    pub trials: u64,
    pub base_seed: u64,
    pub step_cap: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub point: GridPoint,
    pub analytic: Option<BigRational>,
    pub estimate: Result<EstimateRow, ExperimentError>,
}

pub fn sweep(setup: &SweepSetup<'_>, grid: &[GridPoint]) -> Vec<SweepRow> {
    grid.iter()
        .map(|point| {
            let policy = VerifierPolicy::new(point.variant, point.rounds, setup.kinds.clone(), point.rho_r)
                .and_then(|p| match setup.step_cap {
                    Some(cap) => p.with_step_cap(cap),
                    None => Ok(p),
                })
                .map_err(ExperimentError::from);
            let analytic = policy.as_ref().ok().and_then(|p| analytic_failure_to_reject(p).ok());
            let estimate = policy.and_then(|policy| {
                estimate(&ExperimentPlan {
                    automaton: setup.automaton,
                    word: setup.word.clone(),
                    policy,
                    source: setup.source.clone(),
                    trials: setup.trials,
                    base_seed: setup.base_seed,
                })
            });
            SweepRow {
                point: point.clone(),
                analytic,
                estimate,
            }
        })
        .collect()
}

pub const CSV_HEADER: [&str; 18] = [
    "variant",
    "rounds",
    "rho_r",
    "rho_r_decimal",
    "trials",
    "accept_rate",
    "reject_rate",
    "loopcapped_rate",
    "failure_to_reject",
    "failure_to_reject_decimal",
    "half_width",
    "analytic_fr",
    "analytic_fr_decimal",
    "within_interval",
    "mean_coins",
    "lied_head",
    "lie_kind",
    "status",
];

/// Writes rows in the fixed [`CSV_HEADER`] order. Heads are 1-based.
pub fn write_csv<W: io::Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let rho = row.point.rho_r.to_rational();
        let analytic = row.analytic.as_ref();
        let mut record: Vec<String> = vec![
            row.point.variant.to_string(),
            row.point.rounds.to_string(),
            rho.to_string(),
            decimal(&rho, 6),
        ];
        match &row.estimate {
            Ok(e) => {
                let ftr = e.failure_to_reject();
                record.extend([
                    e.trials.to_string(),
                    decimal(&e.accept_rate(), 6),
                    decimal(&e.reject_rate(), 6),
                    decimal(&e.loopcapped_rate(), 6),
                    ftr.to_string(),
                    decimal(&ftr, 6),
                    format!("{:.6}", e.failure_half_width()),
                    analytic.map(ToString::to_string).unwrap_or_default(),
                    analytic.map(|r| decimal(r, 6)).unwrap_or_default(),
                    analytic
                        .map(|r| e.failure_interval_contains(r).to_string())
                        .unwrap_or_default(),
                    format!("{:.6}", e.mean_coins()),
                    e.adversary.as_ref().map(|r| (r.lied_head + 1).to_string()).unwrap_or_default(),
                    e.adversary.as_ref().map(|r| r.kind.to_string()).unwrap_or_default(),
                    "ok".to_string(),
                ]);
            }
            Err(err) => {
                let status = match err {
                    ExperimentError::AdversaryUnavailable { .. } => "adversary-unavailable".to_string(),
                    other => format!("error: {other}"),
                };
                record.extend(std::iter::repeat(String::new()).take(7));
                record.push(analytic.map(ToString::to_string).unwrap_or_default());
                record.push(analytic.map(|r| decimal(r, 6)).unwrap_or_default());
                record.extend(std::iter::repeat(String::new()).take(4));
                record.push(status);
            }
        }
        debug_assert_eq!(record.len(), CSV_HEADER.len());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Empirical failure to reject of each row, or `None` for failed rows.
pub fn empirical_failures(rows: &[SweepRow]) -> Vec<Option<BigRational>> {
    rows.iter()
        .map(|r| r.estimate.as_ref().ok().map(EstimateRow::failure_to_reject))
        .collect()
}

/// Index of the smallest empirical failure to reject, first on ties.
pub fn empirical_argmin(rows: &[SweepRow]) -> Option<usize> {
    let values = empirical_failures(rows);
    let mut best: Option<(usize, BigRational)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let Some(v) = v else { continue };
        if best.as_ref().map_or(true, |(_, b)| v < *b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}
