//! Command-line front end. Heads are numbered from 1.
//!
//! Exit status: 0 on success (including reject verdicts), 1 when the request
//! has no answer (no honest certificate, no available lie, resource limits),
//! 2 for malformed input or usage errors.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::{BigInt, BigRational, One, Zero};

use headwind::analysis::{self, render, AnalysisError, MixParameters};
use headwind::automaton::{decide_membership_capped, AutomatonSpec, Sym, DEFAULT_CONFIGURATION_CAP};
use headwind::certificates::{honest_certificate, Certificate, LieKind};
use headwind::examples;
use headwind::experiment::{self, CertificateSource, ExperimentPlan, GridPoint, SweepSetup};
use headwind::format::{parse_automaton, parse_certificate, serialize_automaton, serialize_certificate};
use headwind::verifier::{run_verifier, Dyadic, Variant, VerifierPolicy};
use headwind::windability::{classify_heads, HeadKind, HeadStatus, SearchBounds, SearchOptions};
use headwind::multistep::StartMode;

#[derive(Parser)]
#[command(name = "headwind", version, about = "Multi-head two-way automata and constant-randomness verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of WORD.
    Run {
        /// Automaton file, or `builtin:NAME`.
        file: String,
        word: String,
        #[arg(long, default_value_t = DEFAULT_CONFIGURATION_CAP)]
        cap: usize,
    },
    /// Print an honest certificate for a member word.
    Prove { file: String, word: String },
    /// Run one verification and print its trace.
    Verify {
        file: String,
        word: String,
        /// Certificate file, or `-` for standard input; honest when omitted.
        cert: Option<String>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long)]
        seed: u64,
    },
    /// Classify heads as windable or reliable.
    Windability {
        file: String,
        #[arg(long)]
        head: Option<usize>,
        #[arg(long, default_value_t = 16)]
        stem_bound: usize,
        #[arg(long, default_value_t = 16)]
        cycle_bound: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Require every head to read `^` on the first step.
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate the error formulas exactly.
    Analyze {
        #[arg(long)]
        kw: usize,
        #[arg(long)]
        kr: usize,
        #[arg(long)]
        rounds: u32,
        /// Defaults to the reliable-side optimum when it is defined.
        #[arg(long)]
        rho_r: Option<String>,
    },
    /// Estimate error components by repeated seeded verification.
    Estimate {
        file: String,
        word: String,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Estimate over a grid of parameters and print CSV.
    Sweep {
        file: String,
        word: String,
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated variants.
        #[arg(long, default_value = "v2")]
        verifiers: String,
        /// Comma-separated reliable-side probabilities `P/Q`.
        #[arg(long)]
        rho_r: String,
        /// Comma-separated round counts.
        #[arg(long)]
        rounds: String,
        #[command(flatten)]
        kinds: KindArgs,
        #[arg(long)]
        step_cap: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// List built-in automata, or print one in the automaton format.
    Examples { name: Option<String> },
}

#[derive(Args)]
struct KindArgs {
    /// Comma-separated windable heads; the rest are reliable. Searched when omitted.
    #[arg(long)]
    windable: Option<String>,
}

#[derive(Args)]
struct PolicyArgs {
    #[arg(long, default_value = "v2")]
    verifier: String,
    #[arg(long)]
    rounds: u32,
    /// Probability `P/Q` (Q a power of two) of shadowing a reliable head.
    #[arg(long, default_value = "1/2")]
    rho_r: String,
    /// Coins used for the threshold; at least log2 Q.
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    step_cap: Option<u64>,
    #[command(flatten)]
    kinds: KindArgs,
}

#[derive(Args)]
struct SourceArgs {
    /// HEAD, HEAD:winding or HEAD:accept.
    #[arg(long, conflicts_with_all = ["honest", "worst_case"])]
    adversary: Option<String>,
    #[arg(long)]
    honest: bool,
    /// Try every single-head lie and keep the worst.
    #[arg(long)]
    worst_case: bool,
}

enum Failure {
    Domain(String),
    Input(String),
}

type Outcome<T> = Result<T, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn load_automaton(file: &str) -> Outcome<AutomatonSpec> {
    if let Some(name) = file.strip_prefix("builtin:") {
        return examples::by_name(name)
            .map(|e| e.automaton)
            .ok_or_else(|| Failure::Input(format!("no built-in automaton named `{name}`")));
    }
    let text = fs::read_to_string(file).map_err(|e| Failure::Input(format!("{file}: {e}")))?;
    parse_automaton(&text).map_err(|e| Failure::Input(format!("{file}: {e}")))
}

fn load_word(a: &AutomatonSpec, word: &str) -> Outcome<Vec<Sym>> {
    a.parse_word(word).map_err(input)
}

fn load_certificate(a: &AutomatonSpec, path: &str) -> Outcome<Certificate> {
    let text = if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(input)?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
    };
    parse_certificate(&text, a).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn parse_head(text: &str, heads: usize) -> Outcome<usize> {
    match text.trim().parse::<usize>() {
        Ok(h) if (1..=heads).contains(&h) => Ok(h - 1),
        _ => Err(Failure::Input(format!("`{text}` is not a head between 1 and {heads}"))),
    }
}

fn kinds_for(a: &AutomatonSpec, args: &KindArgs) -> Outcome<Vec<HeadKind>> {
    match &args.windable {
        Some(list) => {
            let mut kinds = vec![HeadKind::Reliable; a.heads()];
            for tok in list.split(',').filter(|t| !t.trim().is_empty()) {
                kinds[parse_head(tok, a.heads())?] = HeadKind::Windable;
            }
            Ok(kinds)
        }
        None => classify_heads(a, &SearchBounds::default(), &SearchOptions::default(), &[])
            .map(|c| c.kinds())
            .map_err(domain),
    }
}

fn build_policy(a: &AutomatonSpec, args: &PolicyArgs) -> Outcome<VerifierPolicy> {
    let variant = Variant::parse(&args.verifier)
        .ok_or_else(|| Failure::Input(format!("unknown verifier `{}` (expected v1, v1p, v2 or v2p)", args.verifier)))?;
    let rho_r = Dyadic::parse(&args.rho_r).map_err(input)?;
    let kinds = kinds_for(a, &args.kinds)?;
    let rho_r = if variant.is_biased() { rho_r } else { Dyadic::one() };
    let mut policy = VerifierPolicy::new(variant, args.rounds, kinds, rho_r).map_err(input)?;
    if let Some(bits) = args.bits {
        policy = policy.with_bits(bits).map_err(input)?;
    }
    if let Some(cap) = args.step_cap {
        policy = policy.with_step_cap(cap).map_err(input)?;
    }
    Ok(policy)
}

fn build_source(a: &AutomatonSpec, args: &SourceArgs) -> Outcome<CertificateSource> {
    if args.honest {
        return Ok(CertificateSource::Honest);
    }
    if args.worst_case {
        return Ok(CertificateSource::WorstCase);
    }
    let Some(spec) = &args.adversary else {
        return Err(Failure::Input("one of --adversary, --honest or --worst-case is required".into()));
    };
    let (head, kind) = match spec.split_once(':') {
        Some((h, "winding")) => (h, LieKind::Winding),
        Some((h, "accept")) => (h, LieKind::FalseAccept),
        Some((_, other)) => return Err(Failure::Input(format!("unknown lie kind `{other}` (expected winding or accept)"))),
        None => (spec.as_str(), LieKind::Winding),
    };
    Ok(CertificateSource::Adversary {
        lied_head: parse_head(head, a.heads())?,
        prefer: kind,
    })
}

fn parse_list<T>(text: &str, parse: impl Fn(&str) -> Outcome<T>) -> Outcome<Vec<T>> {
    let items = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse)
        .collect::<Outcome<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Failure::Input(format!("`{text}` is an empty list")));
    }
    Ok(items)
}

fn parse_rational(text: &str) -> Outcome<BigRational> {
    let bad = || Failure::Input(format!("`{text}` is not a fraction P/Q"));
    let (p, q) = text.split_once('/').unwrap_or((text, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

fn cmd_run(out: &mut impl Write, file: &str, word: &str, cap: usize) -> Outcome<()> {
    let a = load_automaton(file)?;
    let w = load_word(&a, word)?;
    let verdict = decide_membership_capped(&a, &w, cap).map_err(domain)?;
    writeln!(out, "{}", verdict.outcome).map_err(input)
}

fn cmd_prove(out: &mut impl Write, file: &str, word: &str) -> Outcome<()> {
    let a = load_automaton(file)?;
    let w = load_word(&a, word)?;
    let cert = honest_certificate(&a, &w)
        .map_err(domain)?
        .ok_or_else(|| Failure::Domain(format!("`{word}` is not accepted; no honest certificate exists")))?;
    write!(out, "{}", serialize_certificate(&cert, &a)).map_err(input)
}

fn cmd_verify(out: &mut impl Write, file: &str, word: &str, cert: Option<&str>, policy: &PolicyArgs, seed: u64) -> Outcome<()> {
    let a = load_automaton(file)?;
    let w = load_word(&a, word)?;
    let policy = build_policy(&a, policy)?;
    let cert = match cert {
        Some(path) => load_certificate(&a, path)?,
        None => honest_certificate(&a, &w)
            .map_err(domain)?
            .ok_or_else(|| Failure::Domain(format!("`{word}` is not accepted; give a certificate file")))?,
    };
    let trace = run_verifier(&a, &w, &cert, &policy, seed).map_err(input)?;
    let kinds: Vec<String> = policy.kinds().iter().map(ToString::to_string).collect();
    writeln!(out, "verifier = {}", policy.variant()).map_err(input)?;
    writeln!(out, "rounds = {}", policy.rounds()).map_err(input)?;
    if policy.variant().is_biased() {
        writeln!(out, "head_kinds = {}", kinds.join(",")).map_err(input)?;
        writeln!(out, "rho_r = {}", policy.rho_r()).map_err(input)?;
        writeln!(out, "bits = {}", policy.bits()).map_err(input)?;
    }
    writeln!(out, "step_cap = {}", policy.step_cap_for(&a, w.len())).map_err(input)?;
    writeln!(out, "seed = {seed}").map_err(input)?;
    write!(out, "{trace}").map_err(input)
}

fn cmd_windability(
    out: &mut impl Write,
    file: &str,
    head: Option<usize>,
    bounds: SearchBounds,
    strict: bool,
) -> Outcome<()> {
    let a = load_automaton(file)?;
    let options = SearchOptions {
        mode: if strict { StartMode::Strict } else { StartMode::Literal },
        ..SearchOptions::default()
    };
    let only = head.map(|h| parse_head(&h.to_string(), a.heads())).transpose()?;
    let overrides: Vec<Option<HeadKind>> = (0..a.heads())
        .map(|h| match only {
            Some(o) if o != h => Some(HeadKind::Reliable),
            _ => None,
        })
        .collect();
    let classification = classify_heads(&a, &bounds, &options, &overrides).map_err(domain)?;
    writeln!(out, "bounds = {bounds}").map_err(input)?;
    for (h, status) in classification.statuses.iter().enumerate() {
        if only.is_some_and(|o| o != h) {
            continue;
        }
        match status {
            HeadStatus::Windable(wt) => {
                let names = |syms: &[Sym]| syms.iter().map(|s| a.symbol_name(*s)).collect::<Vec<_>>().join(" ");
                let moves = |m: &[i8]| m.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                writeln!(out, "head {}: windable", h + 1).map_err(input)?;
                writeln!(out, "  cycle_state = {}", a.state_name(wt.cycle_state())).map_err(input)?;
                writeln!(out, "  stem_length = {}", wt.stem_log.len()).map_err(input)?;
                writeln!(out, "  stem_reads = {}", names(wt.stem_profile.row(h))).map_err(input)?;
                writeln!(out, "  stem_moves = {}", moves(&wt.stem_log.histories[h])).map_err(input)?;
                writeln!(out, "  cycle_length = {}", wt.cycle_log.len()).map_err(input)?;
                writeln!(out, "  cycle_reads = {}", names(wt.cycle_profile.row(h))).map_err(input)?;
                writeln!(out, "  cycle_moves = {}", moves(&wt.cycle_log.histories[h])).map_err(input)?;
            }
            HeadStatus::NoWitnessWithinBounds(_) => {
                writeln!(out, "head {}: reliable (no winding witness within bounds)", h + 1).map_err(input)?;
            }
            HeadStatus::Overridden(kind) => writeln!(out, "head {}: {kind} (given)", h + 1).map_err(input)?,
        }
    }
    if only.is_none() {
        writeln!(out, "kw = {}", classification.windable_count()).map_err(input)?;
        writeln!(out, "kr = {}", classification.reliable_count()).map_err(input)?;
    }
    Ok(())
}

fn cmd_analyze(out: &mut impl Write, kw: usize, kr: usize, rounds: u32, rho_r: Option<&str>) -> Outcome<()> {
    let k = kw + kr;
    let opt = analysis::rho_opt(kw, kr);
    let rho_r = match rho_r {
        Some(text) => parse_rational(text)?,
        None => match (&opt, kw, kr) {
            (Ok(r), _, _) => r.clone(),
            (Err(_), 0, _) => BigRational::one(),
            (Err(_), _, 0) => BigRational::zero(),
            (Err(e), _, _) => return Err(input(e)),
        },
    };
    let mix = MixParameters::new(kw, kr, rho_r, rounds).map_err(input)?;
    let mut lines: Vec<(String, String)> = vec![
        ("kw".into(), kw.to_string()),
        ("kr".into(), kr.to_string()),
        ("k".into(), k.to_string()),
        ("rounds".into(), rounds.to_string()),
        ("rho_r".into(), render(&mix.rho_r)),
        ("rho_w".into(), render(&mix.rho_w())),
    ];
    let show = |r: Result<BigRational, AnalysisError>| match r {
        Ok(v) => render(&v),
        Err(e) => format!("undefined ({e})"),
    };
    lines.push(("rho_opt".into(), show(opt)));
    lines.push(("optimal_fr".into(), render(&analysis::optimal_fr(kw))));
    lines.push(("fr_windable".into(), show(analysis::fr_windable(&mix))));
    lines.push(("fr_reliable".into(), show(analysis::fr_reliable(&mix))));
    lines.push(("fr".into(), show(analysis::fr(&mix))));
    match analysis::limit_curves(&mix) {
        Ok(l) => {
            lines.push(("fr_windable_limit".into(), render(&l.fr_windable_limit)));
            lines.push(("fr_reliable_limit".into(), render(&l.fr_reliable_limit)));
        }
        Err(e) => lines.push(("limit_curves".into(), format!("undefined ({e})"))),
    }
    for variant in [Variant::V1, Variant::V1Prime, Variant::V2, Variant::V2Prime] {
        match analysis::verifier_error_bounds(variant, &mix) {
            Ok(b) => {
                lines.push((format!("{variant}.false_rejection"), render(&b.false_rejection)));
                lines.push((format!("{variant}.failure_to_reject"), render(&b.failure_to_reject)));
                lines.push((format!("{variant}.false_acceptance"), render(&b.false_acceptance)));
                if let Some(alt) = &b.alternative_false_acceptance {
                    lines.push((format!("{variant}.false_acceptance_single_lie"), render(alt)));
                }
                lines.push((format!("{variant}.weak_error"), render(&b.weak_error())));
                lines.push((format!("{variant}.strong_error"), render(&b.strong_error())));
            }
            Err(e) => lines.push((format!("{variant}"), format!("undefined ({e})"))),
        }
    }
    lines.push(("v1p.strong_error_closed".into(), render(&analysis::v1_prime_strong_error(k))));
    lines.push(("v1p.strong_error_alternative".into(), render(&analysis::v1_prime_strong_error_alternative(k))));
    lines.push(("v2p.limit_strong_error".into(), show(analysis::v2_prime_limit_strong_error(kw))));
    for (key, value) in lines {
        writeln!(out, "{key} = {value}").map_err(input)?;
    }
    Ok(())
}

fn cmd_estimate(
    out: &mut impl Write,
    file: &str,
    word: &str,
    source: &SourceArgs,
    policy: &PolicyArgs,
    trials: u64,
    seed: u64,
) -> Outcome<()> {
    let a = load_automaton(file)?;
    let w = load_word(&a, word)?;
    let source = build_source(&a, source)?;
    let policy = build_policy(&a, policy)?;
    let analytic = experiment::analytic_failure_to_reject(&policy).ok();
    let plan = ExperimentPlan {
        automaton: &a,
        word: w,
        policy,
        source,
        trials,
        base_seed: seed,
    };
    let row = experiment::estimate(&plan).map_err(domain)?;
    let mut put = |k: &str, v: String| writeln!(out, "{k} = {v}").map_err(input);
    put("trials", row.trials.to_string())?;
    if let Some(report) = &row.adversary {
        put("lied_head", (report.lied_head + 1).to_string())?;
        put("lie_kind", report.kind.to_string())?;
        put("divergence_step", report.divergence_step.to_string())?;
    }
    put("accept_rate", render(&row.accept_rate()))?;
    put("reject_rate", render(&row.reject_rate()))?;
    put("loopcapped_rate", render(&row.loopcapped_rate()))?;
    put("failure_to_reject", render(&row.failure_to_reject()))?;
    put("failure_to_reject_half_width", format!("{:.6}", row.failure_half_width()))?;
    put("false_acceptance", render(&row.false_acceptance()))?;
    put("false_acceptance_half_width", format!("{:.6}", row.half_width_of(row.accepts)))?;
    put("mean_coins", format!("{:.6}", row.mean_coins()))?;
    put("coin_budget_mismatches", row.coin_mismatches.to_string())?;
    if let Some(v) = analytic {
        put("analytic_fr", render(&v))?;
        put("within_interval", row.failure_interval_contains(&v).to_string())?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    out: &mut impl Write,
    file: &str,
    word: &str,
    source: &SourceArgs,
    verifiers: &str,
    rho_r: &str,
    rounds: &str,
    kinds: &KindArgs,
    step_cap: Option<u64>,
    trials: u64,
    seed: u64,
) -> Outcome<()> {
    let a = load_automaton(file)?;
    let w = load_word(&a, word)?;
    let source = build_source(&a, source)?;
    let variants = parse_list(verifiers, |t| {
        Variant::parse(t).ok_or_else(|| Failure::Input(format!("unknown verifier `{t}`")))
    })?;
    let rhos = parse_list(rho_r, |t| Dyadic::parse(t).map_err(input))?;
    let rounds = parse_list(rounds, |t| t.parse::<u32>().map_err(|_| Failure::Input(format!("`{t}` is not a round count"))))?;
    let kinds = kinds_for(&a, kinds)?;
    let mut grid = Vec::new();
    for &variant in &variants {
        for &m in &rounds {
            for &rho in &rhos {
                grid.push(GridPoint {
                    variant,
                    rho_r: if variant.is_biased() { rho } else { Dyadic::one() },
                    rounds: m,
                });
            }
        }
    }
    let setup = SweepSetup {
        automaton: &a,
        word: w,
        kinds,
        source,
        trials,
        base_seed: seed,
        step_cap,
    };
    let rows = experiment::sweep(&setup, &grid);
    experiment::write_csv(out, &rows).map_err(input)
}

fn cmd_examples(out: &mut impl Write, name: Option<&str>) -> Outcome<()> {
    match name {
        None => {
            for e in examples::all() {
                writeln!(out, "{}\t{} heads\t{}", e.name, e.automaton.heads(), e.language).map_err(input)?;
            }
            Ok(())
        }
        Some(name) => {
            let e = examples::by_name(name).ok_or_else(|| Failure::Input(format!("no built-in automaton named `{name}`")))?;
            writeln!(out, "# {}: {}", e.name, e.language).map_err(input)?;
            write!(out, "{}", serialize_automaton(&e.automaton)).map_err(input)
        }
    }
}

fn dispatch(cli: Cli, out: &mut impl Write) -> Outcome<()> {
    match cli.command {
        Command::Run { file, word, cap } => cmd_run(out, &file, &word, cap),
        Command::Prove { file, word } => cmd_prove(out, &file, &word),
        Command::Verify { file, word, cert, policy, seed } => cmd_verify(out, &file, &word, cert.as_deref(), &policy, seed),
        Command::Windability { file, head, stem_bound, cycle_bound, window, strict } => {
            let bounds = SearchBounds::new(stem_bound, cycle_bound, window).map_err(input)?;
            cmd_windability(out, &file, head, bounds, strict)
        }
        Command::Analyze { kw, kr, rounds, rho_r } => cmd_analyze(out, kw, kr, rounds, rho_r.as_deref()),
        Command::Estimate { file, word, source, policy, trials, seed } => {
            cmd_estimate(out, &file, &word, &source, &policy, trials, seed)
        }
        Command::Sweep { file, word, source, verifiers, rho_r, rounds, kinds, step_cap, trials, seed } => {
            cmd_sweep(out, &file, &word, &source, &verifiers, &rho_r, &rounds, &kinds, step_cap, trials, seed)
        }
        Command::Examples { name } => cmd_examples(out, name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = dispatch(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("headwind: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("headwind: {msg}");
            ExitCode::from(2)
        }
    }
}
