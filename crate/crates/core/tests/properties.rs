use proptest::prelude::*;

use tworoute::bench::gap_percent;
use tworoute::generator::{build_kalmanson, generate_2tsp_instance, generate_kalmanson, seeded_rng, GeneratorParams, KalmansonRecipe};
use tworoute::knn::{knn, ks_heuristic};
use tworoute::matrices::{
    check_demidenko, check_kalmanson, check_kalmanson_adjacent, kalmanson_alphas, kalmanson_betas, RealMatrix,
};
use tworoute::pyramidal::{belperm, optimal_pyramidal};
use tworoute::sliding::{random_feasible_solution, sliding_subset_search_with, SearchOptions, SlidingParams};
use tworoute::two_tsp::{brute_force_tsp, evaluate_solution, oracle_2tsp, solve_balanced_2tsp, Balance, TwoTspInstance};
use tworoute::vrp::{evaluate_2vrp, random_2vrp_instance, solve_2vrp_exact, TwoVrpInstance, Vehicle};
use tworoute::{Costs, Error, Permutation, SymmetricCostMatrix};

fn recipe_from(n: usize, values: &[u8]) -> KalmansonRecipe {
    let mut it = values.iter().cycle().map(|&v| v as f64 + 1.0);
    let mut take = |k: usize| -> Vec<f64> { it.by_ref().take(k).collect() };
    KalmansonRecipe {
        first_row: take(n - 1),
        second_last: take(1)[0],
        betas: take(n - 3),
        alphas: take((n - 3) * (n - 2) / 2),
    }
}

/// Integer Kalmanson matrix of order `n`.
fn kalmanson_matrix(n: usize, values: &[u8]) -> SymmetricCostMatrix {
    build_kalmanson(&recipe_from(n, values)).unwrap().shifted
}

fn kalmanson_strategy(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = SymmetricCostMatrix> {
    (sizes, prop::collection::vec(0u8..9, 8..40)).prop_map(|(n, v)| kalmanson_matrix(n, &v))
}

fn to_real(c: &SymmetricCostMatrix) -> RealMatrix {
    RealMatrix::from_rows(&(0..c.n()).map(|i| c.row(i).to_vec()).collect::<Vec<_>>()).unwrap()
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_and_adjacent_checks_agree(
        c in kalmanson_strategy(4..=12),
        bump in (0usize..12, 0usize..12, -3i32..=3),
    ) {
        let n = c.n();
        let (i, j, delta) = (bump.0 % n, bump.1 % n, bump.2 as f64);
        let c = if i != j && c.get(i, j) + delta >= 0.0 {
            SymmetricCostMatrix::from_fn(n, |a, b| {
                if (a, b) == (i, j) || (a, b) == (j, i) { c.get(a, b) + delta } else { c.get(a, b) }
            })
            .unwrap()
        } else {
            c
        };
        prop_assert_eq!(check_kalmanson(&c, false).holds, check_kalmanson_adjacent(&c).holds);
    }

    #[test]
    fn cyclic_shifts_stay_kalmanson(c in kalmanson_strategy(4..=10), k in 0usize..10) {
        let shift = Permutation::identity(c.n()).cyclic_shift(k % c.n());
        prop_assert!(check_kalmanson(&c.permute(&shift).unwrap(), false).holds);
        prop_assert!(check_demidenko(&c).holds);
    }

    #[test]
    fn identity_tour_is_a_master_tour(c in kalmanson_strategy(4..=8), drop_mask in 0u32..256) {
        let n = c.n();
        let all: Vec<usize> = (0..n).collect();
        prop_assert_eq!(brute_force_tsp(&c, &all).0, c.tour_length(&all));
        let kept: Vec<usize> = all.iter().copied().filter(|&v| v == 0 || drop_mask >> v & 1 == 0).collect();
        prop_assert_eq!(brute_force_tsp(&c, &kept).0, c.tour_length(&kept));
    }

    #[test]
    fn pyramidal_dp_solves_kalmanson(c in kalmanson_strategy(4..=9)) {
        let all: Vec<usize> = (0..c.n()).collect();
        prop_assert_eq!(optimal_pyramidal(&c).length, brute_force_tsp(&c, &all).0);
    }

    #[test]
    fn belperm_never_worse(values in prop::collection::vec(1u8..100, 144), n in 4usize..=12, k in 0usize..12) {
        let c = SymmetricCostMatrix::from_fn(n, |i, j| {
            if i == j { 0.0 } else { values[i.min(j) * 12 + i.max(j)] as f64 }
        })
        .unwrap();
        let start = Permutation::identity(n).cyclic_shift(k % n).reversed();
        let out = belperm(&c, &start);
        prop_assert!(out.length <= c.tour_length(start.as_slice()));
        prop_assert_eq!(out.nodes[0], 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generator_hidden_order_and_recipe(seed in any::<u64>(), n in 4usize..=20) {
        let p = GeneratorParams::new(n, seed);
        let g = generate_kalmanson(&p).unwrap();
        prop_assert_eq!(&g.matrix, &generate_kalmanson(&p).unwrap().matrix);
        prop_assert!(check_kalmanson(&g.matrix.permute(&g.hidden_order).unwrap(), true).holds);

        let raw = build_kalmanson(&g.recipe).unwrap().raw;
        for m in [raw, to_real(&g.kalmanson)] {
            let alphas: Vec<f64> = kalmanson_alphas(&m).iter().map(|a| a.2).collect();
            let betas: Vec<f64> = kalmanson_betas(&m).iter().map(|b| b.1).collect();
            prop_assert!(close(&alphas, &g.recipe.alphas));
            prop_assert!(close(&betas, &g.recipe.betas));
        }
    }

    #[test]
    fn shifting_off_diagonal_keeps_alphas_and_betas(c in kalmanson_strategy(4..=9), shift in 0u8..20) {
        let moved = SymmetricCostMatrix::from_fn(c.n(), |i, j| if i == j { 0.0 } else { c.get(i, j) + shift as f64 }).unwrap();
        prop_assert_eq!(kalmanson_alphas(&to_real(&c)), kalmanson_alphas(&to_real(&moved)));
        prop_assert_eq!(kalmanson_betas(&to_real(&c)), kalmanson_betas(&to_real(&moved)));
    }

    #[test]
    fn knn_recovers_an_order_from_every_start(seed in any::<u64>(), n in 6usize..=16) {
        let g = generate_kalmanson(&GeneratorParams::new(n, seed)).unwrap();
        for start in 1..n {
            let tour = knn(&g.matrix, start).unwrap().tour;
            prop_assert!(check_kalmanson(&g.matrix.permute(&tour).unwrap(), false).holds, "start {}", start);
        }
        let identity: Vec<usize> = (0..n).collect();
        let mut reversed = vec![0];
        reversed.extend((1..n).rev());
        let on_ordered = knn(&g.kalmanson, 1).unwrap().tour.into_vec();
        prop_assert!(on_ordered == identity || on_ordered == reversed, "{:?}", on_ordered);
    }

    #[test]
    fn ks_is_optimal_and_feasible(seed in any::<u64>(), n in 6usize..=24, fixed in 1usize..6) {
        let fixed = if (n + fixed) % 2 == 0 { fixed } else { fixed + 1 };
        let g = generate_2tsp_instance(&GeneratorParams::new(n, seed), fixed, Balance::Exact).unwrap();
        let sol = ks_heuristic(&g.instance).unwrap();
        prop_assert!(evaluate_solution(&g.instance, &sol).feasible);
        prop_assert!((sol.total - g.optimum).abs() <= 1e-9 * g.optimum);
    }

    #[test]
    fn two_tsp_dp_exact_in_kalmanson_order(seed in any::<u64>(), n in 6usize..=9, fixed in 2usize..=4) {
        prop_assume!((n + fixed) % 2 == 0);
        let g = generate_2tsp_instance(&GeneratorParams::new(n, seed), fixed, Balance::Exact).unwrap();
        let ordered = g.instance.relabel(&g.generated.hidden_order).unwrap();
        let dp = solve_balanced_2tsp(&ordered).unwrap();
        prop_assert!(evaluate_solution(&ordered, &dp).feasible);
        prop_assert_eq!(dp.total, oracle_2tsp(&ordered).unwrap().total);
    }

    #[test]
    fn two_tsp_dp_bounded_by_oracle(
        values in prop::collection::vec(1u8..100, 66),
        n in 4usize..=12,
        fixed_mask in any::<u16>(),
    ) {
        let c = SymmetricCostMatrix::from_fn(n, |i, j| {
            let (a, b) = (i.min(j), i.max(j));
            if a == b { 0.0 } else { values[(a * 12 + b) % values.len()] as f64 }
        }).unwrap();
        let mut fixed: Vec<usize> = std::iter::once(0).chain((1..n).filter(|v| fixed_mask >> v & 1 == 1)).collect();
        if (n + fixed.len()) % 2 == 1 {
            if fixed.len() > 1 {
                fixed.pop();
            } else {
                fixed.push(1);
            }
        }
        let inst = TwoTspInstance::new(c, &fixed).unwrap();
        let dp = solve_balanced_2tsp(&inst).unwrap();
        prop_assert!(evaluate_solution(&inst, &dp).feasible);
        if n <= 10 {
            prop_assert!(dp.total >= oracle_2tsp(&inst).unwrap().total);
        }
    }

    #[test]
    fn gap_is_scale_invariant(seed in any::<u64>(), factor in 0.01f64..100.0) {
        let g = generate_2tsp_instance(&GeneratorParams::new(12, seed), 4, Balance::Exact).unwrap();
        let scaled = g.instance.scaled(factor).unwrap();
        let hidden = &g.generated.hidden_order;
        let optimum = solve_balanced_2tsp(&scaled.relabel(hidden).unwrap()).unwrap().total;
        let plain = gap_percent(solve_balanced_2tsp(&g.instance).unwrap().total, g.optimum);
        let rescaled = gap_percent(solve_balanced_2tsp(&scaled).unwrap().total, optimum);
        prop_assert!((plain - rescaled).abs() <= 1e-7 * plain.abs().max(1.0));
        prop_assert_eq!(gap_percent(g.optimum, g.optimum), 0.0);
    }
}

fn uses_infinite_edge(inst: &TwoVrpInstance, routes: &[Vec<tworoute::vrp::Visit>; 2]) -> bool {
    routes.iter().enumerate().any(|(m, r)| {
        r.iter().any(|v| inst.customers[v.customer].traversal(Vehicle::from_index(m), v.direction).is_infinite())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_vrp_routes_are_consistent(seed in any::<u64>(), n in 3usize..=12) {
        let inst = random_2vrp_instance(&mut seeded_rng(seed), n);
        match solve_2vrp_exact(&inst) {
            Ok(sol) => {
                prop_assert!(sol.cost.is_finite());
                prop_assert!(!uses_infinite_edge(&inst, &sol.routes));
                prop_assert!(evaluate_2vrp(&inst, &sol).feasible);
                let by_vehicle = inst.route_cost(Vehicle::First, &sol.routes[0]) + inst.route_cost(Vehicle::Second, &sol.routes[1]);
                prop_assert_eq!(sol.cost, by_vehicle);
            }
            Err(e) => prop_assert!(matches!(e, Error::Infeasible(_)), "{}", e),
        }
    }

    #[test]
    fn vrp_text_round_trip(seed in any::<u64>(), n in 1usize..=10) {
        let inst = random_2vrp_instance(&mut seeded_rng(seed), n);
        let back: TwoVrpInstance = inst.to_text().parse().unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn sliding_search_never_hurts(seed in any::<u64>(), n in 8usize..=16, s in 2usize..=3) {
        let inst = random_2vrp_instance(&mut seeded_rng(seed), n);
        let Ok(start) = random_feasible_solution(&inst, &mut seeded_rng(seed ^ 1)) else {
            return Ok(());
        };
        let opts = SearchOptions { audit: true, ..Default::default() };
        let (out, stats) = sliding_subset_search_with(&inst, &start, SlidingParams::new(s, 1).unwrap(), &opts).unwrap();
        prop_assert!(out.cost <= start.cost);
        prop_assert!(evaluate_2vrp(&inst, &out).feasible);
        prop_assert!(stats.audit_failures.is_empty(), "{:?}", stats.audit_failures);
    }
}
