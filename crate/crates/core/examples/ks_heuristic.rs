//! Recover a hidden Kalmanson order with the nearest-neighbour rule and run
//! the KS heuristic on a permuted instance with a known optimum.
//!
//!     cargo run --release --example ks_heuristic -- 50 30 1

use tworoute::generator::{generate_2tsp_instance, GeneratorParams};
use tworoute::knn::{knn, ks_heuristic};
use tworoute::matrices::check_kalmanson;
use tworoute::two_tsp::Balance;

fn main() -> tworoute::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(50);
    let fixed = args.get(1).copied().unwrap_or(30);
    let seed = args.get(2).copied().unwrap_or(1) as u64;

    let g = generate_2tsp_instance(&GeneratorParams::new(n, seed), fixed, Balance::Exact)?;
    let found = knn(g.instance.matrix(), 1)?;
    let reordered = g.instance.matrix().permute(&found.tour)?;
    println!(
        "nearest-neighbour order from node {}: Kalmanson after reordering = {}",
        found.used_start + 1,
        check_kalmanson(&reordered, false).holds
    );

    let sol = ks_heuristic(&g.instance)?;
    println!("KS total {:.6}, known optimum {:.6}", sol.total, g.optimum);
    println!("tour sizes {} and {}", sol.tour1.len(), sol.tour2.len());
    Ok(())
}
