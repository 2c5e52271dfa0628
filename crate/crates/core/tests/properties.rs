//! Property tests for the invariants of the hypergraph, instance, bound and
//! colouring layers.

mod common;

use std::collections::BTreeMap;

use goodcolour::applications::{proper_instance, star_instance};
use goodcolour::bounds::{laurent_objective, parametric_profile};
use goodcolour::colouring::{verify_count_bound, verify_extension_lemma, DEFAULT_BUDGET};
use goodcolour::instance::VertexProfile;
use goodcolour::{
    check_key, closed_form_bound, count_good, find_good, optimize_beta, Application, BadFamily, Beta, Hypergraph,
    Instance, ListAssignment, Strategy as Search, WeightProfile,
};
use proptest::prelude::*;

use common::names;

fn hypergraph(max_n: usize, max_edges: usize, max_size: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::btree_set(0..n, 2..=max_size.min(n)), 0..=max_edges)
            .prop_map(move |edges| {
                Hypergraph::from_handles(names(n), edges.into_iter().map(|e| e.into_iter().collect()).collect())
                    .unwrap()
            })
    })
}

fn simple_graph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::btree_set((0..n, 0..n), 0..=n * (n - 1) / 2).prop_map(move |pairs| {
            let edges: std::collections::BTreeSet<Vec<usize>> = pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| vec![a.min(b), a.max(b)])
                .collect();
            Hypergraph::from_handles(names(n), edges.into_iter().collect()).unwrap()
        })
    })
}

fn profile_counts() -> impl Strategy<Value = BTreeMap<usize, u64>> {
    proptest::collection::btree_map(0usize..6, 0u64..200, 1..5)
}

fn mask(n: usize) -> impl Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), n)
}

fn same(a: &Hypergraph, b: &Hypergraph) -> bool {
    a.names() == b.names() && a.edges() == b.edges()
}

proptest! {
    #[test]
    fn degree_sum_counts_incidences(g in hypergraph(8, 10, 5)) {
        let degrees: usize = (0..g.num_vertices()).map(|h| g.degree(h)).sum();
        let sizes: usize = g.edges().iter().map(Vec::len).sum();
        prop_assert_eq!(degrees, sizes);
        prop_assert_eq!(g.max_degree(), (0..g.num_vertices()).map(|h| g.degree(h)).max().unwrap_or(0));
    }

    #[test]
    fn restriction_is_induced_and_composes((g, m1, m2) in hypergraph(8, 10, 4).prop_flat_map(|g| {
        let n = g.num_vertices();
        (Just(g), mask(n), mask(n))
    })) {
        let full = vec![true; g.num_vertices()];
        prop_assert!(same(&g.induced_by_mask(&full).0, &g));
        let (sub, map) = g.induced_by_mask(&m1);
        for (i, e) in sub.edges().iter().enumerate() {
            let original: Vec<&str> = g.edge(map[i]).iter().map(|&h| g.name(h)).collect();
            let restricted: Vec<&str> = e.iter().map(|&h| sub.name(h)).collect();
            prop_assert_eq!(original, restricted);
        }
        let expected = g.edges().iter().filter(|e| e.iter().all(|&h| m1[h])).count();
        prop_assert_eq!(sub.num_edges(), expected);
        // Restricting twice equals restricting once to the intersection.
        let inner: Vec<bool> = (0..g.num_vertices()).filter(|&h| m1[h]).map(|h| m2[h]).collect();
        let both: Vec<bool> = m1.iter().zip(&m2).map(|(a, b)| *a && *b).collect();
        prop_assert!(same(&sub.induced_by_mask(&inner).0, &g.induced_by_mask(&both).0));
        prop_assert!(same(&sub.induced_by_mask(&vec![true; sub.num_vertices()]).0, &sub));
    }

    #[test]
    fn weights_are_in_range_and_tally_degrees(g in hypergraph(8, 10, 5)) {
        let inst = proper_instance(g.clone());
        for (e, edge) in g.edges().iter().enumerate() {
            for &v in edge {
                let w = inst.pair_weight_handle(e, v);
                prop_assert!(w < edge.len());
                // Monochromatic families: one other vertex determines the colouring.
                prop_assert_eq!(w, edge.len() - 2);
            }
        }
        let profile = inst.weight_profile();
        for (h, entry) in profile.entries.iter().enumerate() {
            prop_assert_eq!(entry.total(), g.degree(h) as u64);
        }
    }

    #[test]
    fn partition_weight_matches_materialized_family(sizes in proptest::collection::vec(2usize..=3, 1..=3)) {
        let n: usize = sizes.iter().sum();
        let mut blocks = Vec::new();
        let mut next = 0;
        for s in &sizes {
            blocks.push((next..next + s).collect::<Vec<usize>>());
            next += s;
        }
        let edge: Vec<usize> = (0..n).collect();
        let g = Hypergraph::from_handles(names(n), vec![edge.clone()]).unwrap();
        let part = Instance::new(g.clone(), vec![BadFamily::partition(blocks.clone())]).unwrap();
        // Every colouring constant on blocks, from the palette {0, 1}.
        let phis: Vec<Vec<i64>> = (0..1u32 << blocks.len())
            .map(|bits| {
                let mut phi = vec![0i64; n];
                for (i, b) in blocks.iter().enumerate() {
                    for &h in b {
                        phi[h] = (bits >> i & 1) as i64;
                    }
                }
                phi
            })
            .collect();
        let explicit = Instance::new(g, vec![BadFamily::explicit(phis)]).unwrap();
        for v in 0..n {
            prop_assert_eq!(part.pair_weight_handle(0, v), n - 1 - blocks.len());
            prop_assert_eq!(part.pair_weight_handle(0, v), explicit.pair_weight_handle(0, v));
        }
    }

    #[test]
    fn objective_is_convex(counts in profile_counts(), beta in 0.2f64..20.0, h in 0.001f64..0.1) {
        let p = WeightProfile::parametric("p", counts);
        let q = |b: f64| laurent_objective(&p, "p", b).unwrap();
        let (lo, mid, hi) = (q(beta - h * beta / 2.0), q(beta), q(beta + h * beta / 2.0));
        prop_assert!(lo + hi - 2.0 * mid >= -1e-9 * mid.abs().max(1.0));
    }

    #[test]
    fn optimizer_is_minimal(entries in proptest::collection::vec(profile_counts(), 1..4)) {
        let p = WeightProfile::exact(
            entries.into_iter().enumerate().map(|(i, counts)| VertexProfile { vertex: format!("v{i}"), counts }).collect(),
        );
        let opt = optimize_beta(&p);
        prop_assert!(opt.beta >= 1.0);
        prop_assert!(check_key(&p, opt.beta, opt.c).unwrap().satisfied);
        let worst = |b: f64| p.entries.iter().map(|e| laurent_objective(&p, &e.vertex, b).unwrap()).fold(f64::MIN, f64::max);
        for i in 0..=400 {
            let b = 1.0 + i as f64 * 0.05;
            prop_assert!(worst(b) >= opt.objective - 1e-9 * opt.objective.max(1.0));
        }
        if opt.c > 1 {
            // One colour fewer fails at the optimum, hence at every beta >= 1.
            prop_assert!(!check_key(&p, opt.beta, opt.c - 1).unwrap().satisfied);
        }
    }

    #[test]
    fn closed_forms_satisfy_their_parametric_profiles(
        r in 3u64..9, delta in 2u64..2000, k in 2u64..6, t in 1u64..60, rk in 3u64..6, c in 2u64..6, sk in 2u64..21,
    ) {
        let apps = [
            Application::ProperHypergraph { r, delta },
            Application::ProperGraph { delta, beta: Beta::ratio(3, 2) },
            Application::Star { delta: delta.min(300) },
            Application::Nonrepetitive { delta: delta.min(100) + 1 },
            Application::Frugal { delta: delta.min(60) + k, k },
            Application::Transversal { r: r - 1, t },
            Application::Ramsey { k: rk, c, d_k: None },
            Application::KSat { k: sk },
        ];
        for app in apps {
            let cf = closed_form_bound(&app).unwrap();
            let profile = parametric_profile(&app).unwrap();
            let key = check_key(&profile, cf.beta, cf.c).unwrap();
            prop_assert!(key.satisfied, "{:?}: c={} beta={} slack={}", app, cf.c, cf.beta, key.min_slack);
        }
    }

    #[test]
    fn star_optimum_within_closed_form(g in simple_graph(7)) {
        let delta = g.max_degree() as u64;
        prop_assume!(delta >= 2);
        let inst = star_instance(&g).unwrap();
        let profile = inst.weight_profile();
        let cap = 2 * delta * (delta - 1) * (delta - 1);
        for e in &profile.entries {
            prop_assert!(e.counts.get(&1).copied().unwrap_or(0) <= cap);
        }
        let closed = closed_form_bound(&Application::Star { delta }).unwrap().c;
        prop_assert!(optimize_beta(&profile).c <= closed);
    }

    #[test]
    fn removing_an_edge_never_lowers_the_count((g, drop, c) in simple_graph(6).prop_flat_map(|g| {
        let m = g.num_edges().max(1);
        (Just(g), 0..m, 1usize..4)
    })) {
        prop_assume!(g.num_edges() > 0);
        let mut edges = g.edges().to_vec();
        edges.remove(drop);
        let smaller = Hypergraph::from_handles(g.names().to_vec(), edges).unwrap();
        let lists = ListAssignment::uniform(g.num_vertices(), c);
        let with = count_good(&proper_instance(g), &lists, DEFAULT_BUDGET).unwrap().count;
        let without = count_good(&proper_instance(smaller), &lists, DEFAULT_BUDGET).unwrap().count;
        prop_assert!(with <= without);
    }

    #[test]
    fn search_agrees_with_count(g in hypergraph(7, 8, 3), c in 1usize..4) {
        let inst = proper_instance(g.clone());
        let lists = ListAssignment::uniform(g.num_vertices(), c);
        let count = count_good(&inst, &lists, DEFAULT_BUDGET).unwrap().count;
        let found = find_good(&inst, &lists, Search::Exhaustive);
        prop_assert_eq!(found.is_ok(), count > 0u32.into());
        if let Ok(out) = find_good(&inst, &lists, Search::RandomGreedy { restarts: 50, seed: 3 }) {
            prop_assert!(count > 0u32.into());
            prop_assert_eq!(goodcolour::is_bad(&inst, &out.colouring).unwrap(), None);
        }
    }

    #[test]
    fn results_do_not_depend_on_threads(g in hypergraph(8, 10, 3), seed in any::<u64>()) {
        let inst = proper_instance(g.clone());
        let lists = ListAssignment::uniform(g.num_vertices(), 3);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                (
                    count_good(&inst, &lists, DEFAULT_BUDGET).unwrap().count,
                    find_good(&inst, &lists, Search::RandomGreedy { restarts: 20, seed }).ok(),
                )
            })
        };
        prop_assert_eq!(run(1), run(4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn key_condition_implies_both_guarantees(g in hypergraph(6, 6, 3), extra in 0u64..2) {
        let inst = proper_instance(g.clone());
        let profile = inst.weight_profile();
        let opt = optimize_beta(&profile);
        let c = opt.c + extra;
        prop_assume!(c <= 4);
        let key = check_key(&profile, opt.beta, c).unwrap();
        prop_assert!(key.guarantee);
        let beta = if opt.beta == 1.0 { Beta::integer(1) } else { Beta::real(opt.beta) };
        let lists = ListAssignment::uniform(g.num_vertices(), c as usize);
        prop_assert!(verify_count_bound(&inst, &lists, &beta, DEFAULT_BUDGET).unwrap().satisfied);
        prop_assert!(verify_extension_lemma(&inst, &lists, &beta, DEFAULT_BUDGET).unwrap().passed());
    }
}
