//! Optimal pyramidal tours and the cyclic-shift search on a small
//! symmetric instance, compared with brute force.

use tworoute::matrices::{Costs, Permutation, SymmetricCostMatrix};
use tworoute::pyramidal::{belperm, optimal_pyramidal};
use tworoute::two_tsp::brute_force_tsp;

fn main() -> tworoute::Result<()> {
    // Points on two concentric rings, numbered badly on purpose.
    let pts: Vec<(f64, f64)> = (0..10)
        .map(|k| {
            let angle = (k * 7 % 10) as f64 * std::f64::consts::TAU / 10.0;
            let r = if k % 2 == 0 { 10.0 } else { 7.0 };
            (r * angle.cos(), r * angle.sin())
        })
        .collect();
    let c = SymmetricCostMatrix::from_fn(pts.len(), |i, j| {
        ((pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1) * 100.0).round()
    })?;

    let pyramidal = optimal_pyramidal(&c);
    println!("best pyramidal tour {:?} length {}", pyramidal.nodes, pyramidal.length);

    let start = Permutation::identity(c.n());
    println!("identity tour length {}", c.tour_length(start.as_slice()));
    let improved = belperm(&c, &start);
    println!("after cyclic-shift search {:?} length {}", improved.nodes, improved.length);

    let all: Vec<usize> = (0..c.n()).collect();
    let (best, tour) = brute_force_tsp(&c, &all);
    println!("optimal tour {tour:?} length {best}");
    Ok(())
}
