mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skyport_core::solver::{
    self, binomial, solve_branch_and_bound, solve_brute_force, solve_brute_force_with_cap, solve_local_search,
    lagrangian_bound, subtree_lower_bound,
};
use skyport_core::synthetic::{random_instance, SyntheticSpec};
use skyport_core::{
    evaluate_hub_set, AllocationMode, CostTable, Error, Method, ProblemInstance, Scenario, SolverOptions, Zone, ZoneId,
};

use common::*;

fn zone(id: u32, airport: bool) -> Zone {
    Zone::new(id, format!("z{id}"), 40.7, -73.9, airport).unwrap()
}

/// Six origins, two airports with hand-picked costs.
fn hand_fixture() -> ProblemInstance {
    let g = |v: [f64; 8]| v.iter().map(|&x| Some(x)).collect::<Vec<_>>();
    ProblemInstance::new(
        (1..=6).map(|i| zone(i, false)).collect(),
        vec![zone(100, true), zone(200, true)],
        vec![
            g([0.0, 4.0, 9.0, 12.0, 15.0, 20.0, 40.0, 45.0]),
            g([4.0, 0.0, 6.0, 10.0, 12.0, 18.0, 35.0, 42.0]),
            g([9.0, 6.0, 0.0, 5.0, 9.0, 14.0, 30.0, 38.0]),
            g([12.0, 10.0, 5.0, 0.0, 6.0, 10.0, 28.0, 30.0]),
            g([15.0, 12.0, 9.0, 6.0, 0.0, 5.0, 33.0, 25.0]),
            g([20.0, 18.0, 14.0, 10.0, 5.0, 0.0, 38.0, 22.0]),
        ],
        vec![
            vec![Some(9.0), Some(12.0)],
            vec![Some(8.0), Some(11.0)],
            vec![Some(6.0), Some(9.0)],
            vec![Some(7.0), Some(7.0)],
            vec![Some(10.0), Some(5.0)],
            vec![Some(12.0), Some(4.0)],
        ],
        vec![vec![12, 3], vec![8, 6], vec![5, 5], vec![9, 2], vec![2, 11], vec![4, 9]],
    )
    .unwrap()
}

#[test]
fn brute_force_matches_hand_enumeration_of_all_subsets() {
    let inst = hand_fixture();
    for (alpha, beta) in [(0.0, 1.0), (10.0, 1.1), (20.0, 1.0)] {
        let s = Scenario::new(alpha, beta, 2).unwrap();
        let all = subsets(6, 2);
        assert_eq!(all.len(), 15);
        let (best_obj, best_set) = all
            .iter()
            .map(|h| (literal_objective(&inst, &s, h), ids(&inst, h)))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .unwrap();
        let sol = solve_brute_force(&inst, &s).unwrap();
        assert_eq!(sol.objective, best_obj);
        assert_eq!(sol.hubs, best_set);
        assert_eq!(sol.meta.iterations, 15);
        let bb = solve_branch_and_bound(&inst, &s, &SolverOptions::default()).unwrap();
        assert_eq!(bb.hubs, sol.hubs);
    }
}

#[test]
fn brute_force_trivial_cases() {
    let inst = ProblemInstance::new(
        vec![zone(5, false)],
        vec![zone(100, true)],
        vec![vec![Some(0.0), Some(30.0)]],
        vec![vec![Some(4.0)]],
        vec![vec![7]],
    )
    .unwrap();
    let sol = solve_brute_force(&inst, &Scenario::base(1)).unwrap();
    assert_eq!(sol.hubs, vec![ZoneId(5)]);
    assert_eq!(sol.objective, evaluate_hub_set(&[ZoneId(5)], &Scenario::base(1), &inst).unwrap().objective);

    let s0 = Scenario::new(0.0, 1.1, 0).unwrap();
    let sol = solve_brute_force(&hand_fixture(), &s0).unwrap();
    assert!(sol.hubs.is_empty());
    let inst = hand_fixture();
    let expected: f64 = inst
        .demand_pairs()
        .map(|(i, j)| inst.demand[i][j] as f64 * (1.1 * inst.ground_to_airport(i, j).unwrap()))
        .sum();
    assert_eq!(sol.objective, expected);
    assert_eq!(sol.direct_count, 12);
}

#[test]
fn brute_force_cap_refuses_large_enumerations() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inst = random_instance(&mut rng, SyntheticSpec::new(30, 1));
    let err = solve_brute_force_with_cap(&inst, &Scenario::base(10), 1_000).unwrap_err();
    match err {
        Error::EnumerationCap { subsets, n, p, .. } => {
            assert_eq!(subsets, binomial(30, 10));
            assert_eq!((n, p), (30, 10));
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn p_equal_n_opens_everything() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let inst = random_instance(&mut rng, SyntheticSpec::new(7, 2));
    let s = Scenario::new(5.0, 1.0, 7).unwrap();
    let sol = solve_branch_and_bound(&inst, &s, &SolverOptions::default()).unwrap();
    let all: Vec<ZoneId> = inst.origins.iter().map(|z| z.id).collect();
    assert_eq!(sol.hubs, all);
    assert_eq!(sol.objective, evaluate_hub_set(&all, &s, &inst).unwrap().objective);
}

#[test]
fn branch_and_bound_equals_brute_force_in_both_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let inst = oracle_instance(&mut rng);
        let mut s = oracle_scenario(&mut rng, inst.num_origins());
        for mode in [AllocationMode::PerPair, AllocationMode::SinglePerOrigin] {
            s.allocation_mode = mode;
            let bf = solve_brute_force(&inst, &s).unwrap();
            let bb = solve_branch_and_bound(&inst, &s, &SolverOptions::default()).unwrap();
            assert!(rel_eq(bb.objective, bf.objective, 1e-9), "{} vs {}", bb.objective, bf.objective);
            assert_eq!(bb.hubs, bf.hubs);
            assert!(bb.meta.proven_optimal);
        }
    }
}

#[test]
fn solutions_satisfy_model_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let inst = oracle_instance(&mut rng);
        let s = oracle_scenario(&mut rng, inst.num_origins());
        let sol = solve_branch_and_bound(&inst, &s, &SolverOptions::default()).unwrap();
        assert_eq!(sol.hubs.len(), s.p);
        assert!(rel_eq(sol.recompute_objective(), sol.objective, 1e-9));
        assert_eq!(sol.direct_count, sol.routing.iter().filter(|r| r.route.is_direct()).count());
        assert_eq!(sol.routing.len(), inst.demand_pairs().count());
        for r in &sol.routing {
            if let Some(h) = r.route.hub {
                assert!(sol.hubs.contains(&h));
            }
        }
    }
}

#[test]
fn bound_is_admissible_on_every_subtree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let inst = random_instance(&mut rng, SyntheticSpec::new(8, 2));
        let mut s = oracle_scenario(&mut rng, 8);
        s.p = 3;
        if rand::Rng::gen_bool(&mut rng, 0.5) {
            s.allocation_mode = AllocationMode::SinglePerOrigin;
        }
        let table = CostTable::new(&inst, &s);
        let clients = table.clients();
        // Random split of candidates into committed / available / excluded.
        let mut committed = Vec::new();
        let mut available = Vec::new();
        for k in 0..8 {
            match rand::Rng::gen_range(&mut rng, 0..4) {
                0 if committed.len() < 3 => committed.push(k),
                1 => {}
                _ => available.push(k),
            }
        }
        let bound = subtree_lower_bound(&clients, &committed, &available, 3);
        let need = 3 - committed.len();
        let best = subsets(available.len(), need)
            .into_iter()
            .map(|pick| {
                let mut set = committed.clone();
                set.extend(pick.iter().map(|&a| available[a]));
                table.objective(&set)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(bound <= best + 1e-9, "bound {bound} > subtree optimum {best}");

        // Any multipliers give a valid bound, before and after ascent.
        let top = clients.base.iter().fold(0.0, |m: f64, &b| m.max(b));
        let mut u: Vec<f64> = clients.base.iter().map(|_| rand::Rng::gen_range(&mut rng, 0.0..=top)).collect();
        for iterations in [1, 50] {
            let target = if best.is_finite() { best + 100.0 } else { 1e9 };
            let lb = lagrangian_bound(&clients, &committed, &available, 3, target, &mut u, iterations);
            assert!(lb <= best + 1e-6, "lagrangian {lb} > subtree optimum {best}");
        }
    }
}

#[test]
fn solvers_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inst = random_instance(&mut rng, SyntheticSpec::new(25, 3));
    let s = Scenario::new(10.0, 1.1, 4).unwrap();
    let a = solve_branch_and_bound(&inst, &s, &SolverOptions::default()).unwrap();
    let b = solve_branch_and_bound(&inst, &s, &SolverOptions::default()).unwrap();
    assert_eq!((a.hubs, a.objective, a.meta.iterations), (b.hubs, b.objective, b.meta.iterations));
    let opts = SolverOptions::default().with_method(Method::LocalSearch);
    let a = solve_local_search(&inst, &s, &opts).unwrap();
    let b = solve_local_search(&inst, &s, &opts).unwrap();
    assert_eq!((a.hubs, a.meta.iterations), (b.hubs, b.meta.iterations));
}

#[test]
fn time_limit_returns_flagged_incumbent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let inst = random_instance(&mut rng, SyntheticSpec::new(80, 3));
    let s = Scenario::new(0.0, 1.0, 8).unwrap();
    let opts = SolverOptions {
        time_limit: 1e-6,
        ..SolverOptions::default()
    };
    let sol = solve_branch_and_bound(&inst, &s, &opts).unwrap();
    assert_eq!(sol.hubs.len(), 8);
    assert!(!sol.meta.proven_optimal);
    assert!(sol.meta.gap >= 0.0 && sol.meta.gap < 1.0);
}

#[test]
fn local_search_never_beats_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = SolverOptions::default().with_method(Method::LocalSearch);
    for _ in 0..30 {
        let inst = oracle_instance(&mut rng);
        let s = oracle_scenario(&mut rng, inst.num_origins());
        let exact = solve_brute_force(&inst, &s).unwrap();
        let ls = solver::solve(&inst, &s, &opts).unwrap();
        assert!(ls.objective >= exact.objective - 1e-9 * exact.objective.abs());
        assert!(!ls.meta.proven_optimal);
        assert_eq!(ls.hubs.len(), s.p);
    }
}

#[test]
fn local_search_with_p_zero_is_empty() {
    let sol = solve_local_search(&hand_fixture(), &Scenario::base(0), &SolverOptions::default()).unwrap();
    assert!(sol.hubs.is_empty());
    assert_eq!(sol.meta.iterations, 0);
}

#[test]
fn scenario_and_options_are_checked() {
    let inst = hand_fixture();
    assert!(solver::solve(&inst, &Scenario::base(7), &SolverOptions::default()).is_err());
    let bad = SolverOptions {
        time_limit: 0.0,
        ..SolverOptions::default()
    };
    assert!(solver::solve(&inst, &Scenario::base(1), &bad).is_err());
}

#[test]
fn infeasible_instance_names_the_pair() {
    let mut inst = hand_fixture();
    // Origin 3 → airport 200 has no direct cost and no usable hub leg.
    inst.ground_cost[2][7] = None;
    for k in 0..6 {
        inst.aerial_cost[k][1] = None;
    }
    let err = solve_brute_force(&inst, &Scenario::base(2)).unwrap_err();
    assert!(matches!(err, Error::Unroutable { origin: ZoneId(3), airport: ZoneId(200) }), "{err}");
    let err = solve_branch_and_bound(&inst, &Scenario::base(2), &SolverOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Unroutable { .. }));
}

#[test]
fn solution_json_round_trip() {
    let sol = solve_brute_force(&hand_fixture(), &Scenario::new(15.0, 1.1, 2).unwrap()).unwrap();
    let back = skyport_core::HubSolution::from_json(&sol.to_json().unwrap()).unwrap();
    assert_eq!(back, sol);
}
