use ddsg::dalvks::{
    build_lp_p, dalvks_accel_with, dalvks_lp_full, dalvks_peel, dalvks_prop2, make_it_feasible, sweep_candidates,
    DemandVector,
};
use ddsg::ddsp::{ddsp_approx, ddsp_fallback_peel, diversify, DdspOutcome, DdspParams, GammaSolver};
use ddsg::graph::{ColoredGraph, Fraction, Subset};
use ddsg::lp::LpEngine;
use ddsg::oracle::{brute_force_dalvks, brute_force_ddsp};
use proptest::prelude::*;

mod common;
use common::graph;

/// A graph with a demand vector `k_c <= |V_c|`.
fn instance(max_n: usize, max_colors: usize) -> impl Strategy<Value = (ColoredGraph, Vec<usize>)> {
    graph(max_n, max_colors).prop_flat_map(|g| {
        let k = g.color_class_sizes().into_iter().map(|s| 0..=s).collect::<Vec<_>>();
        (Just(g), k)
    })
}

/// A graph with a nonempty subset given as a membership mask.
fn graph_and_subset(max_n: usize, max_colors: usize) -> impl Strategy<Value = (ColoredGraph, Subset)> {
    graph(max_n, max_colors).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), prop::collection::vec(any::<bool>(), n), 0..n).prop_map(|(g, mask, forced)| {
            let members = (0..g.node_count()).filter(|&v| mask[v] || v == forced).collect();
            let s = Subset::new(&g, members).unwrap();
            (g, s)
        })
    })
}

fn alpha_for(g: &ColoredGraph, pick: usize) -> Fraction {
    let c = g.color_count() as u64;
    let options: Vec<Fraction> = (1..=c).map(|q| Fraction::new(q, c)).collect();
    options[pick % options.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn capped_solver_output_is_feasible(g in graph(10, 3), pick in 0usize..8, lp_seed in any::<bool>()) {
        let alpha = alpha_for(&g, pick);
        let solver = if lp_seed { GammaSolver::DalksLp } else { GammaSolver::DalksPeel };
        let outcome = ddsp_approx(&g, DdspParams::new(&g, alpha, solver).unwrap(), &LpEngine::exact()).unwrap();
        if g.diversity().satisfies(alpha) {
            prop_assert!(matches!(outcome, DdspOutcome::Solved(_)));
        }
        if let Some(s) = outcome.subset() {
            prop_assert!(s.diversity().satisfies(alpha));
        } else {
            prop_assert!(!g.diversity().satisfies(alpha));
        }
    }

    #[test]
    fn diversify_only_adds((g, s) in graph_and_subset(12, 4), pick in 0usize..8) {
        let alpha = alpha_for(&g, pick);
        if let Ok(out) = diversify(&g, &s, alpha) {
            prop_assert!(s.members().iter().all(|&v| out.contains(v)));
            prop_assert!(out.diversity().satisfies(alpha));
        } else {
            prop_assert!(!g.diversity().satisfies(alpha));
        }
    }

    #[test]
    fn fallback_peel_returns_a_feasible_subset((g, s) in graph_and_subset(12, 4), pick in 0usize..8) {
        let alpha = alpha_for(&g, pick);
        if !s.diversity().satisfies(alpha) {
            if let Some(out) = ddsp_fallback_peel(&g, &s, alpha).unwrap() {
                prop_assert!(out.members().iter().all(|&v| s.contains(v)));
                prop_assert!(out.diversity().satisfies(alpha));
            }
        }
    }

    #[test]
    fn cap_oracle_is_monotone(g in graph(10, 3)) {
        let c = g.color_count() as u64;
        let mut last = None;
        for q in 1..=c {
            let opt = brute_force_ddsp(&g, Fraction::new(q, c)).unwrap().optimum();
            prop_assert!(opt >= last);
            last = opt;
        }
    }

    #[test]
    fn demand_oracle_is_monotone((g, k) in instance(10, 3)) {
        let opt = brute_force_dalvks(&g, &k).unwrap().optimum();
        for c in 0..k.len() {
            if k[c] > 0 {
                let mut relaxed = k.clone();
                relaxed[c] -= 1;
                prop_assert!(brute_force_dalvks(&g, &relaxed).unwrap().optimum() >= opt);
            }
        }
    }

    #[test]
    fn demand_solvers_meet_demands((g, k) in instance(9, 3)) {
        let lp = LpEngine::exact();
        let k = DemandVector::new(&g, k).unwrap();
        let peel = dalvks_peel(&g, &k).unwrap();
        let accel = dalvks_accel_with(&g, &k, &lp, None).unwrap().best;
        for s in [&peel, &accel, &dalvks_lp_full(&g, &k, &lp).unwrap(), &dalvks_prop2(&g, &k, &lp).unwrap()] {
            prop_assert!(k.is_satisfied_by(s));
        }
        prop_assert!(accel.density() >= peel.density());
    }

    #[test]
    fn completion_meets_demands((g, k) in instance(12, 3), seed in any::<prop::sample::Index>()) {
        let k = DemandVector::new(&g, k).unwrap();
        let s = Subset::new(&g, vec![seed.index(g.node_count())]).unwrap();
        let out = make_it_feasible(&g, &s, &k);
        prop_assert!(k.is_satisfied_by(&out));
        prop_assert!(out.contains(s.members()[0]));
    }

    #[test]
    fn sweep_sets_are_nested_and_completed((g, s) in graph_and_subset(10, 3)) {
        let lp = LpEngine::exact();
        let p = s.color_counts().to_vec();
        let k = DemandVector::new(&g, p.clone()).unwrap();
        let sol = lp.solve_lp(&build_lp_p(&g, &p)).unwrap();
        let cands = sweep_candidates(&g, &k, &sol, 0.0);
        prop_assert!(!cands.is_empty());
        for w in cands.windows(2) {
            prop_assert!(w[0].threshold > w[1].threshold);
            prop_assert!(w[0].raw_set.members().iter().all(|&v| w[1].raw_set.contains(v)));
        }
        for c in &cands {
            prop_assert!(k.is_satisfied_by(&c.feasible_set));
            prop_assert!(c.raw_set.members().iter().all(|&v| c.feasible_set.contains(v)));
        }
    }
}
