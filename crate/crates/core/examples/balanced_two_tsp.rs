//! Solve a balanced two-period TSP on a generated instance with the cubic
//! and the low-memory dynamic program and cross-check against brute force.
//!
//!     cargo run --release --example balanced_two_tsp -- 12 4 7

use tworoute::generator::{generate_2tsp_instance, GeneratorParams};
use tworoute::two_tsp::{
    evaluate_solution, oracle_2tsp, solve_balanced_2tsp, solve_balanced_2tsp_lowmem, Balance, ORACLE_MAX_SIZE,
};

fn main() -> tworoute::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(12);
    let fixed = args.get(1).copied().unwrap_or(4);
    let seed = args.get(2).copied().unwrap_or(7) as u64;

    let g = generate_2tsp_instance(&GeneratorParams::new(n, seed), fixed, Balance::Exact)?;
    println!("n = {n}, nodes in both tours: {:?}", g.instance.fixed_nodes());

    // The DP is exact only in the hidden Kalmanson order.
    let ordered = g.instance.relabel(&g.generated.hidden_order)?;
    let sol = solve_balanced_2tsp(&ordered)?.map_nodes(&g.generated.hidden_order);
    println!("tour 1 {:?}", sol.tour1);
    println!("tour 2 {:?}", sol.tour2);
    println!("total {} (feasible: {})", sol.total, evaluate_solution(&g.instance, &sol).feasible);
    println!("low-memory DP value {}", solve_balanced_2tsp_lowmem(&ordered)?);

    println!("same DP on the scrambled numbering: {}", solve_balanced_2tsp(&g.instance)?.total);
    if n <= ORACLE_MAX_SIZE {
        println!("brute force: {}", oracle_2tsp(&g.instance)?.total);
    }
    Ok(())
}
