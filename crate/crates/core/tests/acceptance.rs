//! Acceptance suite: nine criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails if any criterion fails, except for criteria listed in
//! `KNOWN_UNATTAINABLE`, which are evaluated unchanged and must still fail
//! (a pass there would mean the recorded analysis is stale).

use std::time::Instant;

use domipack::analysis::{
    duality_check, evaluate_theorem, nordhaus_gaddum_check, reduction_identity_check, star_sum_formula,
    tree_rho_gamma_check, Exact, Status, TheoremId,
};
use domipack::families::{construct_gamma_tree, construct_omega, construct_r_gadget, construct_theta, extremal_membership, Family};
use domipack::generators::{directed_star, enumerate_directed_trees, random_digraph, rng};
use domipack::{solve_exact, solve_with, validate, Digraph, ParameterKind, SolveOptions, SolveStatus, DEFAULT_BUDGET};
use rand::seq::SliceRandom;
use rand::Rng;

/// Criterion 7 (γᵗ×₂ = n characterisation) fails on digraphs with 2-cycles:
/// ↔P₃ has γᵗ×₂ = 3 = n while its center has in-degree 2 and is neither an
/// end-vertex nor penultimate.
const KNOWN_UNATTAINABLE: &[usize] = &[7];

const CORPUS_SEED: u64 = 20_240_601;
const ELEVATED_BUDGET: u64 = 1 << 28;

struct Outcome {
    pass: bool,
    summary: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let mut summary = summary;
        if let Some(first) = failures.first() {
            summary.push_str(&format!("; {} failure(s), first: {first}", failures.len()));
        }
        Outcome { pass: failures.is_empty(), summary }
    }
}

fn value(d: &Digraph, kind: ParameterKind) -> Option<usize> {
    solve_with(d, kind, SolveOptions::pruned(DEFAULT_BUDGET)).unwrap().value
}

/// The 500-instance corpus of criteria 1 to 3: n cycles through 1..=10 and
/// the arc probability alternates between 0.2 and 0.5.
fn corpus() -> Vec<Digraph> {
    (0..500u64)
        .map(|i| {
            let n = 1 + (i / 2 % 10) as usize;
            let p = if i % 2 == 0 { 0.2 } else { 0.5 };
            random_digraph(n, p, CORPUS_SEED + i).unwrap()
        })
        .collect()
}

/// Every digraph on `n` vertices.
fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let arcs = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p);
        Digraph::new(n, arcs).unwrap()
    })
}

/// `count` connected random digraphs with `min_n ≤ n ≤ max_n`, drawn with
/// increasing seeds and rejection of disconnected draws.
fn random_connected(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Digraph> {
    let mut out = Vec::with_capacity(count);
    let mut picker = rng(seed);
    let mut s = seed;
    while out.len() < count {
        let n = picker.gen_range(min_n..=max_n);
        let p = [0.3, 0.5, 0.7][picker.gen_range(0..3)];
        let d = random_digraph(n, p, s).unwrap();
        s += 1;
        if d.is_weakly_connected() {
            out.push(d);
        }
    }
    out
}

fn has_two_cycle(d: &Digraph) -> bool {
    d.arcs().any(|(u, v)| d.has_arc(v, u))
}

fn record_failures(d: &Digraph, ids: &[TheoremId], failures: &mut Vec<String>) {
    for &id in ids {
        let r = evaluate_theorem(d, id, DEFAULT_BUDGET);
        match r.status {
            Some(Status::Violated) | Some(Status::Indeterminate) => failures.push(format!(
                "{id} {} on {:?}: lhs={:?} rhs={:?} {}",
                r.status.unwrap(),
                d,
                r.lhs.map(|x| x.to_string()),
                r.rhs.map(|x| x.to_string()),
                r.detail
            )),
            _ => {}
        }
    }
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    let mut dominated = 0;
    for d in corpus() {
        let v = |k| solve_exact(&d, k, DEFAULT_BUDGET).unwrap().value.unwrap();
        let (rho, l2t, l2) = (v(ParameterKind::Packing), v(ParameterKind::Total2LimitedPacking), v(ParameterKind::TwoLimitedPacking));
        if !(rho <= l2t && l2t <= l2) {
            failures.push(format!("ρ={rho} Lᵗ₂={l2t} L₂={l2} on {d:?}"));
        }
        if d.min_in_degree() >= 1 {
            dominated += 1;
            let (g, gt2, gx2) = (v(ParameterKind::Domination), v(ParameterKind::Total2Domination), v(ParameterKind::DoubleDomination));
            if !(g <= gt2 && gt2 <= gx2) {
                failures.push(format!("γ={g} γᵗ×₂={gt2} γ×₂={gx2} on {d:?}"));
            }
        }
    }
    Outcome::new(&failures, format!("500 digraphs, packing chain on all, domination chain on {dominated} with δ⁻ ≥ 1"))
}

fn t2_ids() -> Vec<TheoremId> {
    (1..=2).flat_map(|k| (1..=2).map(move |r| TheoremId::T2 { k, r })).collect()
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let mut ids = vec![TheoremId::T1i, TheoremId::T1ii];
    ids.extend(t2_ids());
    for d in corpus() {
        record_failures(&d, &ids, &mut failures);
    }
    for n in 2..=4 {
        let k = Digraph::complete_biorientation(n);
        for &id in &ids {
            let r = evaluate_theorem(&k, id, DEFAULT_BUDGET);
            if r.status != Some(Status::Equality) {
                failures.push(format!("{id} on ↔K{n}: {:?}", r.status));
            }
        }
    }
    Outcome::new(&failures, "T1(i), T1(ii), four T2 cases on the corpus; all six sharp on ↔K₂..↔K₄".into())
}

/// Every functional digraph on `n` vertices.
fn all_functional(n: usize) -> Vec<Digraph> {
    let mut out = Vec::new();
    let choices = (n - 1).pow(n as u32);
    for mut code in 0..choices {
        let arcs: Vec<(usize, usize)> = (0..n)
            .map(|u| {
                let pick = code % (n - 1);
                code /= n - 1;
                (u, if pick >= u { pick + 1 } else { pick })
            })
            .collect();
        out.push(Digraph::new(n, arcs).unwrap());
    }
    out
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for d in corpus() {
        record_failures(&d, &[TheoremId::Thm123, TheoremId::ThmTheta], &mut failures);
    }
    let mut built = 0;
    for n_prime in 2..=3 {
        for f in all_functional(n_prime) {
            for r in 1..=3 {
                if r < f.max_in_degree() || (r - 1) * n_prime % 2 == 1 {
                    continue;
                }
                for (family, inst) in [
                    (Family::Omega, construct_omega(&f, Some(r))),
                    (Family::Theta, construct_theta(&f.converse(), Some(r))),
                ] {
                    let inst = match inst {
                        Ok(inst) => inst,
                        Err(e) => {
                            failures.push(format!("{family} n′={n_prime} r={r}: {e}"));
                            continue;
                        }
                    };
                    built += 1;
                    let d = &inst.digraph;
                    let (kind, id, delta) = match family {
                        Family::Omega => (ParameterKind::TwoLimitedPacking, TheoremId::Thm123, d.min_in_degree()),
                        _ => (ParameterKind::DoubleDomination, TheoremId::ThmTheta, d.max_out_degree()),
                    };
                    let v = value(d, kind);
                    let equal = v.is_some_and(|v| v * (delta + 1) == 2 * d.order());
                    let record = evaluate_theorem(d, id, DEFAULT_BUDGET);
                    let member = extremal_membership(d, family, DEFAULT_BUDGET).unwrap_or(false);
                    if !equal || !member || record.status != Some(Status::Equality) || !inst.certificate_holds() {
                        failures.push(format!("{family} n′={n_prime} r={r}: value={v:?} member={member} status={:?}", record.status));
                    }
                }
            }
        }
    }
    Outcome::new(&failures, format!("bounds on the corpus; {built} Ω/Θ instances (n′ ∈ {{2,3}}, r ∈ {{1,2,3}}) sharp and members"))
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut instances: Vec<Digraph> = (1..=3).flat_map(all_digraphs).collect();
    let exhaustive = instances.len();
    instances.extend((0..200u64).map(|i| random_digraph(4, if i % 2 == 0 { 0.3 } else { 0.6 }, CORPUS_SEED + 10_000 + i).unwrap()));
    for d in &instances {
        let r = reduction_identity_check(d, DEFAULT_BUDGET);
        if r.domination_gadget.status != Status::Equality || r.packing_gadget.status != Status::Equality {
            failures.push(format!("{d:?}: {:?} / {:?}", r.domination_gadget, r.packing_gadget));
        }
    }
    Outcome::new(&failures, format!("{exhaustive} exhaustive (n ≤ 3) + 200 random n=4 digraphs, both gadget identities exact"))
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut trees = 0;
    for n in 1..=6 {
        for t in enumerate_directed_trees(n).unwrap() {
            trees += 1;
            match tree_rho_gamma_check(&t, DEFAULT_BUDGET) {
                Ok(r) if r.status == Status::Equality => {}
                other => failures.push(format!("ρ=γ on {t:?}: {other:?}")),
            }
            if n < 2 {
                continue;
            }
            if let Err(e) = duality_check(&t, DEFAULT_BUDGET) {
                failures.push(format!("duality on {t:?}: {e}"));
            }
            record_failures(&t, &[TheoremId::T3], &mut failures);
        }
    }
    Outcome::new(&failures, format!("{trees} directed trees (n ≤ 6): duality, T3 and ρ = γ"))
}

/// γᵗ×₂ of a Γ tree, falling back to the certificate when the search runs out
/// of budget: a valid set whose size meets the lower bound is optimal.
fn gamma_tree_value(d: &Digraph, extremal: &domipack::VertexSet) -> Result<(usize, &'static str), String> {
    let r = solve_with(d, ParameterKind::Total2Domination, SolveOptions::pruned(ELEVATED_BUDGET)).unwrap();
    match r.status {
        SolveStatus::Optimal => Ok((r.value.unwrap(), "solver")),
        SolveStatus::Infeasible => Err("infeasible".into()),
        SolveStatus::BudgetExceeded => {
            let c = d.classify();
            let valid = validate(d, extremal, ParameterKind::Total2Domination).unwrap().is_valid();
            let lower = Exact::frac(2 * d.order() + c.e + 2 - c.p, 3);
            if valid && Exact::int(extremal.len()) == lower {
                Ok((extremal.len(), "certificate"))
            } else {
                Err(format!("budget exceeded and certificate fails (valid={valid})"))
            }
        }
    }
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut picker = rng(CORPUS_SEED + 6);
    let mut by_certificate = 0;
    for i in 0..50u64 {
        let r = picker.gen_range(1..=3);
        let r_prime = picker.gen_range(if r == 1 { 1 } else { 0 }..=2);
        let stars: Vec<usize> = (0..r_prime).map(|_| *[3, 4, 5].choose(&mut picker).unwrap()).collect();
        let inst = match construct_gamma_tree(r, &stars, i) {
            Ok(inst) => inst,
            Err(e) => {
                failures.push(format!("r={r} stars={stars:?}: {e}"));
                continue;
            }
        };
        let d = &inst.digraph;
        let c = d.classify();
        match gamma_tree_value(d, &inst.extremal_set) {
            Ok((v, how)) => {
                by_certificate += usize::from(how == "certificate");
                if !c.is_directed_tree || 3 * v + c.p != 2 * d.order() + c.e + 2 {
                    failures.push(format!("r={r} stars={stars:?} seed={i}: γᵗ×₂={v} n={} e={} p={}", d.order(), c.e, c.p));
                }
            }
            Err(e) => failures.push(format!("r={r} stars={stars:?} seed={i}: {e}")),
        }
    }
    let figure = construct_gamma_tree(3, &[4, 3], 1).unwrap();
    let d = &figure.digraph;
    let c = d.classify();
    let figure_value = gamma_tree_value(d, &figure.extremal_set);
    match &figure_value {
        Ok((13, _)) if d.order() == 17 && c.is_directed_tree && c.e - c.p == 3 => {}
        other => failures.push(format!("Figure 1 configuration: n={} e−p={} value={other:?}", d.order(), c.e as i64 - c.p as i64)),
    }
    Outcome::new(
        &failures,
        format!(
            "50 Γ trees tight ({by_certificate} via certificate); r=3, stars [4,3] gives n={}, γᵗ×₂={} ({})",
            d.order(),
            figure_value.as_ref().map(|v| v.0.to_string()).unwrap_or_else(|e| e.clone()),
            figure_value.as_ref().map(|v| v.1).unwrap_or("error")
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut instances: Vec<Digraph> = (2..=4).flat_map(all_digraphs).filter(|d| d.is_weakly_connected()).collect();
    let exhaustive = instances.len();
    instances.extend(random_connected(300, 2, 8, CORPUS_SEED + 7_000));
    let (mut oriented, mut oriented_mismatches) = (0, 0);
    for d in &instances {
        let r = evaluate_theorem(d, TheoremId::Ng1, DEFAULT_BUDGET);
        let two_cycle = has_two_cycle(d);
        oriented += usize::from(!two_cycle);
        if r.status != Some(Status::Indeterminate) && r.status.is_some_and(|s| s.holds()) {
            continue;
        }
        oriented_mismatches += usize::from(!two_cycle);
        failures.push(format!(
            "{d:?}: γᵗ×₂={} n={} degree_condition={:?}",
            r.lhs.map(|x| x.to_string()).unwrap_or("?".into()),
            d.order(),
            r.characterization
        ));
    }
    Outcome::new(
        &failures,
        format!(
            "{exhaustive} exhaustive (2 ≤ n ≤ 4) + 300 random connected digraphs; {} mismatches, {oriented_mismatches} among {oriented} without 2-cycles",
            failures.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut instances: Vec<Digraph> = (3..=6).flat_map(|n| enumerate_directed_trees(n).unwrap()).collect();
    let trees = instances.len();
    instances.extend(random_connected(200, 3, 8, CORPUS_SEED + 8_000));
    let random = instances.len() - trees;
    for d in &instances {
        match nordhaus_gaddum_check(d, DEFAULT_BUDGET) {
            Ok(r) if r.status.holds() => {}
            other => failures.push(format!("{d:?}: {other:?}")),
        }
    }
    let r = construct_r_gadget(&Digraph::empty(1)).unwrap().digraph;
    match nordhaus_gaddum_check(&r, DEFAULT_BUDGET) {
        Ok(rec) if rec.n == 9 && rec.sum.is_some_and(|s| 9 * s == 16 * 9) => {}
        other => failures.push(format!("R over one vertex: {other:?}")),
    }
    let mut stars = 0;
    for a in 0..=3 {
        for b in 0..=3 {
            if a + b < 2 {
                continue;
            }
            stars += 1;
            let s = directed_star(a, b).unwrap();
            let sum = value(&s, ParameterKind::Total2LimitedPacking).unwrap() + value(&s.converse(), ParameterKind::Total2LimitedPacking).unwrap();
            if sum != star_sum_formula(a, b) {
                failures.push(format!("star a={a} b={b}: sum {sum}, table {}", star_sum_formula(a, b)));
            }
        }
    }
    Outcome::new(
        &failures,
        format!("{trees} trees (3 ≤ n ≤ 6) + {random} random connected (3 ≤ n ≤ 8); R gadget 9·16 = 16·9; star table on {stars} stars with n ≥ 3"),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut picker = rng(CORPUS_SEED + 9);
    let mut compared = 0;
    for i in 0..200u64 {
        let n = picker.gen_range(1..=9);
        let p = picker.gen_range(0.1..0.8);
        let d = random_digraph(n, p, CORPUS_SEED + 9_000 + i).unwrap();
        for kind in ParameterKind::ALL {
            let plain = solve_with(&d, kind, SolveOptions::plain(DEFAULT_BUDGET)).unwrap();
            let pruned = solve_with(&d, kind, SolveOptions::pruned(DEFAULT_BUDGET)).unwrap();
            compared += 1;
            if (plain.status, plain.value, &plain.witness) != (pruned.status, pruned.value, &pruned.witness) {
                failures.push(format!("{kind} on {d:?}: plain {:?}/{:?} pruned {:?}/{:?}", plain.value, plain.witness, pruned.value, pruned.witness));
            }
        }
    }
    Outcome::new(&failures, format!("200 random digraphs (n ≤ 9) × 8 kinds = {compared} comparisons, values and witnesses identical"))
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 9] = [
        (1, "definitional chains", criterion_1),
        (2, "T1 and T2 bounds", criterion_2),
        (3, "L₂ upper / γ×₂ lower bound, Ω and Θ", criterion_3),
        (4, "reduction identities", criterion_4),
        (5, "tree duality, T3, ρ = γ", criterion_5),
        (6, "Γ equality", criterion_6),
        (7, "γᵗ×₂ = n biconditional", criterion_7),
        (8, "Nordhaus–Gaddum", criterion_8),
        (9, "pruned = plain search", criterion_9),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (outcome.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known, see analysis)",
            (false, false) => "FAIL",
        };
        println!("criterion {id} [{tag}] {name}: {} ({:.1}s)", outcome.summary, start.elapsed().as_secs_f64());
        if outcome.pass == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
