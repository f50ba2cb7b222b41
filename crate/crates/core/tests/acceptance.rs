//! Acceptance suite: one PASS/FAIL line per criterion. Built without the
//! libtest harness so the lines always reach the console; exits non-zero
//! when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use headwind::analysis::{
    fr, fr_reliable, fr_reliable_sum, fr_windable, fr_windable_sum, limit_curves, optimal_fr, rational, rho_opt,
    scenario_tree_oracle, upfront_rejection, v1_prime_strong_error, v2_prime_limit_strong_error,
    v2_prime_strong_error_closed, verifier_error_bounds, LiedHead, MixParameters,
};
use headwind::automaton::{clamp_endmarkers, decide_membership, make_halting, AutomatonSpec, Outcome, Sym};
use headwind::certificates::{adversary_certificate, honest_certificate, LieKind};
use headwind::examples;
use headwind::experiment::{estimate, estimate_certificate, CertificateSource, EstimateRow, ExperimentPlan};
use headwind::multistep::{consistent_filter, multi_step, ReadingProfile, StartMode};
use headwind::verifier::{
    coin_budget, ceil_log2, run_verifier, run_verifier_with, upfront_reject, Counted, Dyadic, ScriptedCoins,
    SeededCoins, Variant, VerifierPolicy,
};
use headwind::windability::{find_winding_witness, verify_witness, HeadKind, SearchBounds, SearchOptions};
use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rho_grid() -> Vec<BigRational> {
    vec![rational(0, 1), rational(1, 4), rational(1, 2), rational(3, 4), rational(1, 1)]
}

fn criterion_1() -> Check {
    let mut cases = 0;
    for kw in 1..=4 {
        for kr in 1..=4 {
            for m in 1..=5 {
                for rho in rho_grid() {
                    let p = MixParameters::new(kw, kr, rho.clone(), m).map_err(|e| e.to_string())?;
                    let w = fr_windable(&p).map_err(|e| e.to_string())?;
                    let ws = fr_windable_sum(&p).map_err(|e| e.to_string())?;
                    let wo = scenario_tree_oracle(&p, LiedHead::Windable).map_err(|e| e.to_string())?;
                    let r = fr_reliable(&p).map_err(|e| e.to_string())?;
                    let rs = fr_reliable_sum(&p).map_err(|e| e.to_string())?;
                    let ro = scenario_tree_oracle(&p, LiedHead::Reliable).map_err(|e| e.to_string())?;
                    ensure(w == ws && ws == wo, || format!("FRw differs at kw={kw} kr={kr} m={m} rho={rho}: {w} {ws} {wo}"))?;
                    ensure(r == rs && rs == ro, || format!("FRr differs at kw={kw} kr={kr} m={m} rho={rho}: {r} {rs} {ro}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} grid points, closed = sum = tree"))
}

fn criterion_2() -> Check {
    for kw in 1..=4 {
        for kr in 1..=4 {
            let rho = rho_opt(kw, kr).map_err(|e| e.to_string())?;
            let p = MixParameters::new(kw, kr, rho, 1).map_err(|e| e.to_string())?;
            let curves = limit_curves(&p).map_err(|e| e.to_string())?;
            let target = BigRational::one() - rational(1, kw as i64);
            ensure(
                curves.fr_reliable_limit == target && curves.fr_windable_limit == target && optimal_fr(kw) == target,
                || format!("kw={kw} kr={kr}: {curves:?} vs {target}"),
            )?;
        }
    }
    Ok("16 (kw, kr) pairs meet at 1 - 1/kw".into())
}

fn criterion_3() -> Check {
    for k in 2..=8usize {
        let p = MixParameters::new(1, k - 1, rational(1, 2), 3).map_err(|e| e.to_string())?;
        let b = verifier_error_bounds(Variant::V1Prime, &p).map_err(|e| e.to_string())?;
        let closed = rational((k * k - 1) as i64, (2 * k * k) as i64);
        ensure(b.strong_error() == closed && v1_prime_strong_error(k) == closed, || {
            format!("V1' strong error at k={k}: {}", b.strong_error())
        })?;
    }
    ensure(v1_prime_strong_error(2) == rational(3, 8), || "V1' k=2 is not 3/8".into())?;
    for kw in 1..=6usize {
        let closed = rational((kw * kw - 1) as i64, (2 * kw * kw) as i64);
        let limit = v2_prime_limit_strong_error(kw).map_err(|e| e.to_string())?;
        ensure(limit == closed && v2_prime_strong_error_closed(kw) == closed, || {
            format!("V2' limit at kw={kw}: {limit} vs {closed}")
        })?;
        // ρ_opt < 1 iff kw ≥ 2; only then does finite m approach the limit from above.
        if kw == 1 {
            continue;
        }
        let p = MixParameters::new(kw, 1, rho_opt(kw, 1).map_err(|e| e.to_string())?, 60).map_err(|e| e.to_string())?;
        let finite = verifier_error_bounds(Variant::V2Prime, &p).map_err(|e| e.to_string())?.strong_error();
        let gap = &finite - &closed;
        ensure(gap >= BigRational::zero() && gap < rational(1, 1_000_000), || {
            format!("V2' at m=60, kw={kw}: {finite} not within 1e-6 above {closed}")
        })?;
    }
    ensure(v2_prime_strong_error_closed(2) == rational(3, 8), || "V2' kw=2 is not 3/8".into())?;
    for k in 1..=6usize {
        for m in 1..=4 {
            let p = MixParameters::new(k, 0, BigRational::zero(), m).map_err(|e| e.to_string())?;
            let v2p = verifier_error_bounds(Variant::V2Prime, &p).map_err(|e| e.to_string())?;
            let v1p = verifier_error_bounds(Variant::V1Prime, &p).map_err(|e| e.to_string())?;
            ensure(
                v2p.false_rejection == v1p.false_rejection
                    && v2p.failure_to_reject == v1p.failure_to_reject
                    && v2p.strong_error() == v1p.strong_error(),
                || format!("V2' with kw=k={k}, m={m} differs from V1': {v2p:?} vs {v1p:?}"),
            )?;
        }
    }
    Ok("V1' (k^2-1)/(2k^2), V2' (kw^2-1)/(2kw^2), kw=k collapses to V1'".into())
}

fn liar_policy(variant: Variant, rho_r: Dyadic) -> Result<VerifierPolicy, String> {
    VerifierPolicy::new(variant, 3, vec![HeadKind::Windable, HeadKind::Reliable], rho_r).map_err(|e| e.to_string())
}

fn criterion_4() -> Check {
    let e = examples::liar_gadget();
    let a = &e.automaton;
    let word = e.designated_word.clone();
    let trials = 100_000;
    let rho_opt_value = rho_opt(1, 1).map_err(|e| e.to_string())?;
    ensure(rho_opt_value == BigRational::one(), || "rho_opt(1,1) is not 1".into())?;
    let winding = adversary_certificate(a, &word, 1, LieKind::Winding)
        .map_err(|e| e.to_string())?
        .ok_or("no winding lie about head 2")?;
    ensure(winding.1.kind == LieKind::Winding, || "head 2 lie does not wind".into())?;
    let accepting = adversary_certificate(a, &word, 0, LieKind::FalseAccept)
        .map_err(|e| e.to_string())?
        .ok_or("no accepting lie about head 1")?;
    ensure(accepting.1.kind == LieKind::FalseAccept, || "head 1 lie does not accept".into())?;

    let mut notes = Vec::new();
    for variant in [Variant::V2, Variant::V2Prime] {
        for (label, rho) in [("1/2", Dyadic::new(1, 1).unwrap()), ("rho_opt=1", Dyadic::one())] {
            let policy = liar_policy(variant, rho)?;
            let mix = MixParameters::new(1, 1, rho.to_rational(), 3).map_err(|e| e.to_string())?;
            let upfront = if variant == Variant::V2Prime {
                headwind::analysis::upfront_pass(1)
            } else {
                BigRational::one()
            };
            let check = |row: &EstimateRow, value: &BigRational, what: &str| -> Result<(), String> {
                ensure(row.failure_half_width() <= 0.005, || format!("{what}: half-width {}", row.failure_half_width()))?;
                ensure(row.failure_interval_contains(value), || {
                    format!(
                        "{variant} rho={label} {what}: empirical {} outside {} ± {:.4}",
                        headwind::experiment::to_f64(&row.failure_to_reject()),
                        headwind::experiment::to_f64(value),
                        row.failure_half_width()
                    )
                })
            };
            let worst = estimate(&ExperimentPlan {
                automaton: a,
                word: word.clone(),
                policy: policy.clone(),
                source: CertificateSource::WorstCase,
                trials,
                base_seed: 7,
            })
            .map_err(|e| e.to_string())?;
            let target = &upfront * fr(&mix).map_err(|e| e.to_string())?;
            check(&worst, &target, "worst-case adversary vs fr")?;

            let wind_row = estimate_certificate(a, &word, &winding.0, &policy, trials, 11).map_err(|e| e.to_string())?;
            let wind_target = &upfront * fr_reliable(&mix).map_err(|e| e.to_string())?;
            check(&wind_row, &wind_target, "winding lie on head 2 vs FRr")?;

            let acc_row = estimate_certificate(a, &word, &accepting.0, &policy, trials, 13).map_err(|e| e.to_string())?;
            let acc_target = &upfront * fr_windable(&mix).map_err(|e| e.to_string())?;
            check(&acc_row, &acc_target, "accepting lie on head 1 vs FRw")?;
            notes.push(format!(
                "{variant}@{label}: {:.4}",
                headwind::experiment::to_f64(&worst.failure_to_reject())
            ));
        }
    }
    Ok(notes.join(", "))
}

fn member_words(name: &str, max_len: usize) -> Vec<String> {
    let (pred, alphabet) = common::predicate_for(name).expect("known example");
    common::all_words(&alphabet, max_len).into_iter().filter(|w| pred(w)).collect()
}

fn criterion_5() -> Check {
    let mut accepted = 0u64;
    for (name, max_len) in [("a1", 8), ("a2", 6), ("a3", 6), ("a4", 6)] {
        let e = examples::by_name(name).ok_or("missing example")?;
        let a = &e.automaton;
        let kinds = e.expected_kinds.clone().unwrap_or_else(|| vec![HeadKind::Reliable; a.heads()]);
        let kw = kinds.iter().filter(|&&k| k == HeadKind::Windable).count();
        let rho = if kw >= 1 && kw < kinds.len() { Dyadic::new(1, 1).unwrap() } else if kw == 0 { Dyadic::one() } else { Dyadic::zero() };
        let policies = [
            VerifierPolicy::new(Variant::V1, 3, kinds.clone(), rho).map_err(|e| e.to_string())?,
            VerifierPolicy::new(Variant::V2, 3, kinds.clone(), rho).map_err(|e| e.to_string())?,
        ];
        let words = member_words(name, max_len);
        ensure(words.len() >= 2, || format!("{name}: too few members"))?;
        for w in words {
            let word = a.parse_word(&w).map_err(|e| e.to_string())?;
            let cert = honest_certificate(a, &word).map_err(|e| e.to_string())?.ok_or_else(|| format!("{name}: no certificate for {w:?}"))?;
            for policy in &policies {
                let row = estimate_certificate(a, &word, &cert, policy, 1000, 0x5eed).map_err(|e| e.to_string())?;
                ensure(row.accepts == 1000, || format!("{name} {w:?} {}: {} of 1000 accepted", policy.variant(), row.accepts))?;
                accepted += row.accepts;
            }
        }
    }
    for c in 1..=9usize {
        for variant in [Variant::V1Prime, Variant::V2Prime] {
            let kinds = match variant {
                Variant::V1Prime => vec![HeadKind::Reliable; c],
                _ => [vec![HeadKind::Windable; c], vec![HeadKind::Reliable]].concat(),
            };
            let policy = VerifierPolicy::new(variant, 1, kinds, Dyadic::new(1, 1).unwrap()).map_err(|e| e.to_string())?;
            let len = ceil_log2(c) + 1;
            let (mut rejects, mut passes) = (0u64, 0u64);
            for value in 0..(1u64 << len) {
                let mut coins = ScriptedCoins::from_value(value, len);
                let reject = upfront_reject(&policy, &mut coins);
                if coins.overrun() > 0 {
                    continue;
                }
                if reject {
                    rejects += 1;
                } else {
                    passes += 1;
                }
            }
            let rate = rational(rejects as i64, (rejects + passes) as i64);
            ensure(rate == upfront_rejection(c) && rate == rational(c as i64 - 1, 2 * c as i64), || {
                format!("{variant} c={c}: {rate}")
            })?;
        }
    }
    Ok(format!("{accepted} honest runs accepted; upfront rates exact for c = 1..9"))
}

fn criterion_6() -> Check {
    let suite = common::micro_suite();
    let bounds = SearchBounds::new(4, 4, 4).map_err(|e| e.to_string())?;
    let options = SearchOptions::default();
    let results: Vec<Result<(usize, usize), String>> = suite
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let mut witnesses = 0;
            let mut windable = 0;
            for head in 0..a.heads() {
                let found = find_winding_witness(a, head, &bounds, &options).map_err(|e| e.to_string())?;
                let literal = common::literal_windable(a, head, 4, 4);
                if let Some(wt) = &found {
                    witnesses += 1;
                    if !verify_witness(a, wt, StartMode::Literal) {
                        return Err(format!("machine {index} head {head}: witness fails verification"));
                    }
                }
                if found.is_some() != literal {
                    return Err(format!(
                        "machine {index} head {head}: search says {}, literal enumeration says {literal}\n{}",
                        found.is_some(),
                        headwind::format::serialize_automaton(a)
                    ));
                }
                windable += literal as usize;
            }
            Ok((witnesses, windable))
        })
        .collect();
    let mut failures: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
    let windable: usize = results.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.1).sum();
    if !failures.is_empty() {
        let count = failures.len();
        failures.truncate(3);
        return Err(format!("{count} disagreements, first: {}", failures.join("; ")));
    }
    Ok(format!("{} machines, {windable} windable heads, all witnesses verify", suite.len()))
}

fn consistent_by_offsets(history: &[i8], readings: &[Sym]) -> bool {
    let mut offset = 0i64;
    let mut seen = std::collections::HashMap::new();
    for (t, s) in readings.iter().enumerate() {
        if *seen.entry(offset).or_insert(*s) != *s {
            return false;
        }
        offset += history[t] as i64;
    }
    true
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd317a);
    let mut nonempty = 0;
    let mut compared = 0;
    for n in 0..500 {
        let k = 1 + n % 2;
        let states = 2 + rng.gen_range(0..2);
        let entries = rng.gen_range(2..=10);
        let a = common::random_machine(&mut rng, k, states, entries);
        for len in 1..=4 {
            for _ in 0..4 {
                let g: ReadingProfile = common::random_profile(&mut rng, &a, len);
                let q = rng.gen_range(0..a.state_count());
                let logs = multi_step(&a, q, &g).map_err(|e| e.to_string())?;
                let (_, oracle) = common::logs_by_paths(&a, q, &g);
                let got: BTreeSet<_> = logs.iter().map(|l| (l.reached, l.histories.clone())).collect();
                ensure(logs.len() == oracle.len() && got == oracle, || {
                    format!("machine {n}: |multi_step| = {} but path enumeration gives {}", logs.len(), oracle.len())
                })?;
                nonempty += !logs.is_empty() as usize;
                for head in 0..k {
                    for mode in [StartMode::Literal, StartMode::Strict] {
                        let filtered = consistent_filter(&a, q, &g, head, mode).map_err(|e| e.to_string())?;
                        ensure(filtered.is_subset(&logs), || format!("machine {n}: consistent_filter not a subset"))?;
                        let strict_ok = mode == StartMode::Literal || g.rows().iter().all(|r| r[0] == Sym::LEFT_END);
                        let expected: BTreeSet<_> = oracle
                            .iter()
                            .filter(|(_, h)| strict_ok && consistent_by_offsets(&h[head], g.row(head)))
                            .cloned()
                            .collect();
                        let got: BTreeSet<_> = filtered.iter().map(|l| (l.reached, l.histories.clone())).collect();
                        ensure(got == expected, || format!("machine {n}: consistent_filter differs from offset check"))?;
                    }
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} profiles on 500 machines, {nonempty} with logs"))
}

fn criterion_8() -> Check {
    let suite = common::micro_suite();
    let results: Vec<Result<usize, String>> = suite
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let clamped = clamp_endmarkers(a);
            let halting = make_halting(a);
            let mut loops = 0;
            for len in 0..=4 {
                let word = vec![Sym::input(0); len];
                let verdict = |m: &AutomatonSpec| decide_membership(m, &word).map(|v| v.outcome).map_err(|e| e.to_string());
                let (orig, cl, ha) = (verdict(a)?, verdict(&clamped)?, verdict(&halting)?);
                loops += (orig == Outcome::Loop) as usize;
                if (orig == Outcome::Accept) != (cl == Outcome::Accept) || (orig == Outcome::Accept) != (ha == Outcome::Accept) {
                    return Err(format!("machine {index}, |w|={len}: {orig} / clamped {cl} / halting {ha}"));
                }
                if ha == Outcome::Loop {
                    return Err(format!("machine {index}, |w|={len}: halting version loops"));
                }
            }
            Ok(loops)
        })
        .collect();
    let mut loops = 0;
    for r in results {
        loops += r?;
    }
    Ok(format!("{} machines x 5 words, {loops} loops removed", suite.len()))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_headwind"))
        .args(args)
        .env("HEADWIND_THREADS", "3")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

fn criterion_9() -> Check {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["run", "builtin:a3", "ab#aabb"],
        vec!["prove", "builtin:a1", "aabbccdd"],
        vec!["verify", "builtin:liar_gadget", "ab", "--rounds", "3", "--seed", "5"],
        vec!["verify", "builtin:a4", "abc", "--verifier", "v1p", "--rounds", "4", "--seed", "9"],
        vec!["windability", "builtin:a3"],
        vec!["analyze", "--kw", "2", "--kr", "3", "--rounds", "4"],
        vec!["estimate", "builtin:liar_gadget", "a", "--worst-case", "--rounds", "3", "--trials", "3000", "--seed", "1"],
        vec!["estimate", "builtin:reliable_gadget", "aa", "--adversary", "2", "--verifier", "v1", "--rounds", "2", "--trials", "2000", "--seed", "2"],
        vec![
            "sweep", "builtin:liar_gadget", "a", "--worst-case", "--verifiers", "v1,v2,v2p", "--rho-r", "1/4,1/2,1", "--rounds", "1,3",
            "--trials", "1000", "--seed", "3",
        ],
        vec!["examples"],
    ];
    for args in &invocations {
        let first = cli(args);
        let second = cli(args);
        ensure(first == second, || format!("`headwind {}` differs between runs", args.join(" ")))?;
        ensure(first.0 == 0, || {
            format!("`headwind {}` exited {}: {}", args.join(" "), first.0, String::from_utf8_lossy(&first.2))
        })?;
    }

    // Coin accounting on every trace: the flips recorded match an external
    // count, equal the closed-form budget when no re-flip is possible, and
    // never fall below it.
    let mut traces = 0u64;
    let e = examples::liar_gadget();
    let a = &e.automaton;
    let word = e.designated_word.clone();
    let mut certs: Vec<_> = [(0, LieKind::FalseAccept), (1, LieKind::Winding)]
        .iter()
        .filter_map(|&(h, kind)| adversary_certificate(a, &word, h, kind).ok().flatten().map(|c| c.0))
        .collect();
    let member = a.parse_word("ab").unwrap();
    certs.push(honest_certificate(a, &member).map_err(|e| e.to_string())?.ok_or("no honest certificate")?);
    let mut layouts: Vec<Vec<HeadKind>> = Vec::new();
    for kw in 0..=3usize {
        for kr in 0..=3usize {
            if kw + kr >= 1 {
                layouts.push([vec![HeadKind::Windable; kw], vec![HeadKind::Reliable; kr]].concat());
            }
        }
    }
    for kinds in layouts {
        let kw = kinds.iter().filter(|&&k| k == HeadKind::Windable).count();
        let kr = kinds.len() - kw;
        // Liar-gadget certificates only run when the policy has two heads.
        for variant in [Variant::V1, Variant::V1Prime, Variant::V2, Variant::V2Prime] {
            let rho = if kw == 0 { Dyadic::one() } else if kr == 0 { Dyadic::zero() } else { Dyadic::new(1, 1).unwrap() };
            let Ok(policy) = VerifierPolicy::new(variant, 3, kinds.clone(), rho) else {
                continue;
            };
            let budget = coin_budget(&policy);
            let no_reflip = {
                let upfront_c = match variant {
                    Variant::V1Prime => kinds.len(),
                    Variant::V2Prime => kw,
                    _ => 1,
                };
                let sides_pow2 = if policy.uses_biased_choice() {
                    kw.is_power_of_two() && kr.is_power_of_two() && kw == kr
                } else {
                    kinds.len().is_power_of_two()
                };
                upfront_c.is_power_of_two() && sides_pow2
            };
            for seed in 0..200u64 {
                if kinds.len() == 2 {
                    for cert in &certs {
                        let word = if cert == certs.last().unwrap() { &member } else { &word };
                        let mut source = SeededCoins::new(seed);
                        let mut counted = Counted::new(&mut source);
                        let trace = run_verifier_with(a, word, cert, &policy, &mut counted).map_err(|e| e.to_string())?;
                        let flips = counted.flips;
                        ensure(trace.coins_flipped == flips, || format!("trace reports {} flips, counted {flips}", trace.coins_flipped))?;
                        ensure(trace.coins_budgeted == budget.total(trace.rounds_started as u64), || "budget field disagrees".into())?;
                        ensure(flips >= trace.coins_budgeted, || "fewer flips than budget".into())?;
                        ensure(!no_reflip || flips == trace.coins_budgeted, || {
                            format!("{variant} {kinds:?} seed {seed}: {flips} flips vs budget {}", trace.coins_budgeted)
                        })?;
                        traces += 1;
                    }
                } else {
                    let trace = run_verifier(a, &word, &certs[0], &policy, seed);
                    ensure(trace.is_err(), || "head-count mismatch accepted".into())?;
                    let mut coins = SeededCoins::new(seed);
                    let mut counted = Counted::new(&mut coins);
                    if variant.has_upfront_coin() && upfront_reject(&policy, &mut counted) {
                        continue;
                    }
                    for _ in 0..policy.rounds() {
                        let before = counted.flips;
                        headwind::verifier::choose_head(&policy, &mut counted);
                        let used = counted.flips - before;
                        ensure(used >= budget.per_round && (!no_reflip || used == budget.per_round), || {
                            format!("{variant} {kinds:?}: round used {used} coins, budget {}", budget.per_round)
                        })?;
                    }
                    traces += 1;
                }
            }
        }
    }
    Ok(format!("{} CLI invocations byte-identical, {traces} traces within coin budget", invocations.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 9] = [
        (1, "formula-oracle identity", criterion_1),
        (2, "optimum identity", criterion_2),
        (3, "headline numbers", criterion_3),
        (4, "Monte Carlo vs analytic", criterion_4),
        (5, "perfect completeness", criterion_5),
        (6, "windability ground truth", criterion_6),
        (7, "multi-step correctness", criterion_7),
        (8, "transformation equivalence", criterion_8),
        (9, "determinism and coin accounting", criterion_9),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (n, name, run) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {n} ({name}): PASS [{}] {detail}", secs(took)),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{}] {detail}", secs(took));
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}
