use std::collections::BTreeSet;

use domipack::analysis::{bounds_report, evaluate_theorem, Status, TheoremId};
use domipack::families::{
    construct_gamma_tree, construct_omega, construct_r_gadget, construct_theta, reduce_domination_gadget,
    reduce_packing_gadget,
};
use domipack::generators::{
    directed_star, enumerate_directed_trees, random_contrafunctional, random_digraph, random_directed_tree,
    random_functional, GenSpec,
};
use domipack::io::{parse_instance, serialize_instance};
use domipack::report::{render, Format};
use domipack::solvers::Objective;
use domipack::{solve_exact, solve_with, validate, Digraph, ParameterKind, SolveOptions, VertexSet, DEFAULT_BUDGET};
use proptest::prelude::*;

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1)).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
            let arcs: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p).collect();
            Digraph::new(n, arcs).unwrap()
        })
    })
}

/// Simple graph as an edge list `u < v`.
fn graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            (n, pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p).collect())
        })
    })
}

/// Oriented digraph: each edge of a random graph gets one direction.
fn oriented(max_n: usize) -> impl Strategy<Value = Digraph> {
    graph(max_n).prop_flat_map(|(n, edges)| {
        proptest::collection::vec(any::<bool>(), edges.len()).prop_map(move |flips| {
            let arcs = edges.iter().zip(flips).map(|(&(u, v), f)| if f { (v, u) } else { (u, v) });
            Digraph::new(n, arcs).unwrap()
        })
    })
}

fn value(d: &Digraph, kind: ParameterKind) -> Option<usize> {
    solve_exact(d, kind, DEFAULT_BUDGET).unwrap().value
}

/// Undirected domination and packing numbers by direct enumeration.
fn graph_gamma_rho(n: usize, edges: &[(usize, usize)]) -> (usize, usize) {
    let mut closed = vec![1u64; n];
    for (v, c) in closed.iter_mut().enumerate() {
        *c <<= v;
    }
    for &(u, v) in edges {
        closed[u] |= 1 << v;
        closed[v] |= 1 << u;
    }
    let mut gamma = n;
    let mut rho = 0;
    for mask in 0u64..1 << n {
        let size = mask.count_ones() as usize;
        if closed.iter().all(|c| c & mask != 0) {
            gamma = gamma.min(size);
        }
        if closed.iter().all(|c| (c & mask).count_ones() <= 1) {
            rho = rho.max(size);
        }
    }
    (gamma, rho)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_sums_equal_arc_count(d in digraph(8)) {
        let n = d.order();
        prop_assert_eq!((0..n).map(|v| d.in_degree(v)).sum::<usize>(), d.arc_count());
        prop_assert_eq!((0..n).map(|v| d.out_degree(v)).sum::<usize>(), d.arc_count());
    }

    #[test]
    fn converse_is_an_involution(d in digraph(8)) {
        let c = d.converse();
        prop_assert_eq!(&c.converse(), &d);
        let (a, b) = (d.classify(), c.classify());
        prop_assert_eq!((a.min_in_degree, a.max_in_degree), (b.min_out_degree, b.max_out_degree));
        prop_assert_eq!((a.min_out_degree, a.max_out_degree), (b.min_in_degree, b.max_in_degree));
        prop_assert_eq!((a.e, a.p, a.is_directed_tree, a.is_connected), (b.e, b.p, b.is_directed_tree, b.is_connected));
    }

    #[test]
    fn biorientation_degrees((n, edges) in graph(8)) {
        let d = Digraph::biorient(n, edges.iter().copied()).unwrap();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let c = d.classify();
        let (lo, hi) = (*degree.iter().min().unwrap(), *degree.iter().max().unwrap());
        prop_assert_eq!((c.min_in_degree, c.min_out_degree), (lo, lo));
        prop_assert_eq!((c.max_in_degree, c.max_out_degree), (hi, hi));
    }

    #[test]
    fn induced_on_everything_is_identity(d in digraph(8)) {
        let (sub, map) = d.induced_subdigraph(&VertexSet::full(d.order())).unwrap();
        prop_assert_eq!(&sub, &d);
        prop_assert_eq!(map, (0..d.order()).collect::<Vec<_>>());
    }

    #[test]
    fn functional_iff_converse_contrafunctional(n in 2usize..10, seed in any::<u64>()) {
        let f = random_functional(n, seed).unwrap();
        prop_assert!(f.classify().is_functional);
        prop_assert!(f.converse().classify().is_contrafunctional);
        prop_assert!(random_contrafunctional(n, seed).unwrap().classify().is_contrafunctional);
    }

    #[test]
    fn parameter_chains(d in digraph(7)) {
        let rho = value(&d, ParameterKind::Packing).unwrap();
        let l2t = value(&d, ParameterKind::Total2LimitedPacking).unwrap();
        let l2 = value(&d, ParameterKind::TwoLimitedPacking).unwrap();
        prop_assert!(rho <= l2t && l2t <= l2);
        prop_assert!(value(&d, ParameterKind::KLimitedPacking(1)).unwrap() <= l2);
        let gamma = value(&d, ParameterKind::Domination).unwrap();
        prop_assert!(gamma <= value(&d, ParameterKind::KDomination(2)).unwrap());
        if d.min_in_degree() >= 1 {
            let gt2 = value(&d, ParameterKind::Total2Domination).unwrap();
            let gx2 = value(&d, ParameterKind::DoubleDomination).unwrap();
            prop_assert!(gamma <= gt2 && gt2 <= gx2);
        }
    }

    #[test]
    fn witnesses_are_valid_and_locally_optimal(d in digraph(7)) {
        let n = d.order();
        for kind in ParameterKind::ALL {
            let r = solve_exact(&d, kind, DEFAULT_BUDGET).unwrap();
            let Some(w) = r.witness else { continue };
            prop_assert!(validate(&d, &w, kind).unwrap().is_valid());
            for v in 0..n {
                let mut other = w.clone();
                let changed = match kind.objective() {
                    Objective::Minimize => other.remove(v),
                    Objective::Maximize => other.insert(v).unwrap(),
                };
                if changed {
                    prop_assert!(!validate(&d, &other, kind).unwrap().is_valid(), "{kind} {w} ±{v}");
                }
            }
        }
    }

    #[test]
    fn biorientation_preserves_gamma_and_rho((n, edges) in graph(8)) {
        let d = Digraph::biorient(n, edges.iter().copied()).unwrap();
        let (gamma, rho) = graph_gamma_rho(n, &edges);
        prop_assert_eq!(value(&d, ParameterKind::Domination), Some(gamma));
        prop_assert_eq!(value(&d, ParameterKind::Packing), Some(rho));
    }

    #[test]
    fn pruned_search_matches_plain(d in digraph(8)) {
        for kind in ParameterKind::ALL {
            let plain = solve_with(&d, kind, SolveOptions::plain(DEFAULT_BUDGET)).unwrap();
            let pruned = solve_with(&d, kind, SolveOptions::pruned(DEFAULT_BUDGET)).unwrap();
            prop_assert_eq!((plain.status, plain.value, &plain.witness), (pruned.status, pruned.value, &pruned.witness));
            let again = solve_exact(&d, kind, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(&again.witness, &plain.witness);
        }
    }

    #[test]
    fn omega_and_theta_constructions(n in 2usize..5, seed in any::<u64>(), extra in 0usize..3) {
        let f = random_functional(n, seed).unwrap();
        let r = f.max_in_degree().max(1) + extra;
        if let Ok(inst) = construct_omega(&f, Some(r)) {
            let d = &inst.digraph;
            prop_assert_eq!(d.min_in_degree(), r);
            for v in inst.seed_vertices.iter() {
                prop_assert_eq!(d.in_degree(v), r);
            }
            for u in inst.added_vertices.iter() {
                // arcs among the added vertices are allowed; exactly two go into the seed
                prop_assert_eq!(d.out_neighbors(u).iter().filter(|&&w| inst.seed_vertices.contains(w)).count(), 2);
            }
            prop_assert!(inst.certificate_holds());
            prop_assert_eq!(inst.extremal_set.len() * (r + 1), 2 * d.order());
            prop_assert_eq!(value(d, ParameterKind::TwoLimitedPacking), Some(inst.extremal_set.len()));
        }
        let c = f.converse();
        if let Ok(inst) = construct_theta(&c, Some(r)) {
            let d = &inst.digraph;
            prop_assert_eq!(d.max_out_degree(), r);
            for v in inst.seed_vertices.iter() {
                prop_assert_eq!(d.out_degree(v), r);
            }
            for u in inst.added_vertices.iter() {
                prop_assert_eq!(d.in_neighbors(u).iter().filter(|&&w| inst.seed_vertices.contains(w)).count(), 2);
            }
            prop_assert!(inst.certificate_holds());
            prop_assert_eq!(inst.extremal_set.len() * (r + 1), 2 * d.order());
            prop_assert_eq!(value(d, ParameterKind::DoubleDomination), Some(inst.extremal_set.len()));
        }
    }

    #[test]
    fn gamma_trees_meet_the_lower_bound(r in 0usize..3, stars in proptest::collection::vec(3usize..5, 0..2), seed in any::<u64>()) {
        prop_assume!(r + stars.len() >= 2);
        let inst = construct_gamma_tree(r, &stars, seed).unwrap();
        let d = &inst.digraph;
        let c = d.classify();
        prop_assert!(c.is_directed_tree);
        let r_prime = stars.len() as i64;
        prop_assert_eq!(c.e as i64 - c.p as i64, stars.iter().sum::<usize>() as i64 - 2 * r_prime);
        let gt2 = solve_with(d, ParameterKind::Total2Domination, SolveOptions::pruned(DEFAULT_BUDGET)).unwrap();
        prop_assert_eq!(3 * gt2.value.unwrap() + c.p, 2 * d.order() + c.e + 2);
        prop_assert_eq!(inst.extremal_set.len(), gt2.value.unwrap());
    }

    #[test]
    fn reduction_gadget_identities(d in digraph(4)) {
        let n = d.order();
        let pruned = SolveOptions::pruned(DEFAULT_BUDGET);
        let dd = reduce_domination_gadget(&d);
        let gamma = value(&d, ParameterKind::Domination).unwrap();
        prop_assert_eq!(solve_with(&dd, ParameterKind::DoubleDomination, pruned).unwrap().value, Some(2 * n + gamma));
        prop_assert_eq!(solve_with(&dd, ParameterKind::Total2Domination, pruned).unwrap().value, Some(2 * n + gamma));
        let lp = reduce_packing_gadget(&d);
        let rho = value(&d, ParameterKind::Packing).unwrap();
        prop_assert_eq!(solve_with(&lp, ParameterKind::TwoLimitedPacking, pruned).unwrap().value, Some(n + rho));
        prop_assert_eq!(solve_with(&lp, ParameterKind::Total2LimitedPacking, pruned).unwrap().value, Some(n + rho));
    }

    #[test]
    fn r_gadget_is_sharp(d in digraph(2)) {
        prop_assume!(d.is_weakly_connected());
        let inst = construct_r_gadget(&d).unwrap();
        let r = &inst.digraph;
        let pruned = SolveOptions::pruned(DEFAULT_BUDGET);
        let a = solve_with(r, ParameterKind::Total2LimitedPacking, pruned).unwrap().value.unwrap();
        let b = solve_with(&r.converse(), ParameterKind::Total2LimitedPacking, pruned).unwrap().value.unwrap();
        prop_assert_eq!(9 * (a + b), 16 * r.order());
    }

    #[test]
    fn generators_are_deterministic(n in 1usize..10, p in 0.0f64..=1.0, seed in any::<u64>()) {
        prop_assert_eq!(random_digraph(n, p, seed).unwrap(), random_digraph(n, p, seed).unwrap());
        let t = random_directed_tree(n, seed).unwrap();
        prop_assert_eq!(&t, &random_directed_tree(n, seed).unwrap());
        prop_assert!(t.classify().is_directed_tree);
    }

    #[test]
    fn stars_and_their_converses(a in 0usize..5, b in 0usize..5) {
        prop_assume!(a + b >= 1);
        let s = directed_star(a, b).unwrap();
        if a + b >= 2 {
            prop_assert_eq!(s.classify().e, a + b);
        }
        let degrees = |d: &Digraph| {
            let mut v: Vec<_> = (0..d.order()).map(|v| (d.in_degree(v), d.out_degree(v))).collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(degrees(&s.converse()), degrees(&directed_star(b, a).unwrap()));
    }

    #[test]
    fn instance_files_round_trip(n in 1usize..9, p in 0.0f64..=1.0, seed in any::<u64>()) {
        for d in [random_digraph(n, p, seed).unwrap(), random_directed_tree(n, seed).unwrap()] {
            prop_assert_eq!(parse_instance(&serialize_instance(&d)).unwrap(), d);
        }
    }

    #[test]
    fn proven_bounds_hold(d in digraph(6)) {
        let report = bounds_report(&d, DEFAULT_BUDGET);
        for record in report.violations() {
            // the γᵗ×₂ = n characterisation is known to fail with 2-cycles; see the acceptance suite
            let known = matches!(record.theorem_id, TheoremId::Ng1 | TheoremId::Ng1Corollary)
                && d.arcs().any(|(u, v)| d.has_arc(v, u));
            prop_assert!(known, "{} violated: {:?}", record.theorem_id, record);
        }
        prop_assert!(report.records.iter().all(|r| r.status != Some(Status::Indeterminate)));
    }

    #[test]
    fn ng1_holds_on_oriented_digraphs(d in oriented(7)) {
        prop_assume!(d.order() >= 2 && d.is_weakly_connected());
        for id in [TheoremId::Ng1, TheoremId::Ng1Corollary] {
            let record = evaluate_theorem(&d, id, DEFAULT_BUDGET);
            prop_assert!(record.status.unwrap().holds(), "{:?}", record);
        }
    }

    #[test]
    fn text_reports_carry_every_json_field(d in digraph(4)) {
        let report = bounds_report(&d, DEFAULT_BUDGET);
        let json: serde_json::Value = serde_json::from_str(&render(&report, Format::Json)).unwrap();
        let text = render(&report, Format::Text);
        for record in json["records"].as_array().unwrap() {
            for key in record.as_object().unwrap().keys() {
                let needle = format!(" {key}=");
                prop_assert!(text.contains(&needle) || text.contains(&format!("records: {key}=")), "missing {key}");
            }
        }
    }
}

#[test]
fn tree_enumeration_counts() {
    for n in 1..=6usize {
        let trees = enumerate_directed_trees(n).unwrap();
        let expected = if n == 1 { 1 } else { n.pow(n as u32 - 2) << (n - 1) };
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for t in trees {
            assert!(t.classify().is_directed_tree, "{t:?}");
            seen.insert(serialize_instance(&t));
            count += 1;
        }
        assert_eq!(count, expected, "n={n}");
        assert_eq!(seen.len(), expected, "duplicates at n={n}");
    }
}

#[test]
fn gen_spec_instances_are_reproducible() {
    let spec: GenSpec = "random:n=6:p=0.4:seed=11".parse().unwrap();
    let a: Vec<_> = spec.instances(20).unwrap().collect();
    let b: Vec<_> = spec.instances(20).unwrap().collect();
    assert_eq!(a, b);
    assert_eq!(a[3].1, spec.sample(3).unwrap());
}
