//! A small two-vehicle instance with edge-like customers, served by the
//! exact subset DP and checked against the brute-force search.

use std::sync::Arc;

use tworoute::matrices::AsymmetricCostMatrix;
use tworoute::vrp::{
    evaluate_2vrp, io::solution_to_text, oracle_2vrp, solve_2vrp_exact, Customer, Depots, TwoVrpInstance, Vehicle,
};

fn main() -> tworoute::Result<()> {
    // Nodes sit on a line; node 0 is the depot of both vehicles.
    let xs: [f64; 8] = [0.0, 2.0, 3.0, 5.0, 6.0, 9.0, 10.0, 12.0];
    let dist = |i: usize, j: usize| (xs[i] - xs[j]).abs();
    let first = AsymmetricCostMatrix::from_fn(xs.len(), dist)?;
    // The second vehicle is slower.
    let second = AsymmetricCostMatrix::from_fn(xs.len(), |i, j| 1.5 * dist(i, j))?;

    let street = |a: usize, b: usize, demand: f64| {
        let len = dist(a, b);
        Customer { left: a, right: b, internal: [[len, len], [1.5 * len, 1.5 * len]], demand, fixed_to: None }
    };
    let mut one_way = street(5, 6, 2.0);
    one_way.internal[0][1] = f64::INFINITY;
    one_way.internal[1][1] = f64::INFINITY;
    let customers = vec![
        street(1, 2, 1.0),
        Customer::point(3, 1.0),
        Customer { fixed_to: Some(Vehicle::Second), ..Customer::point(4, 1.0) },
        one_way,
        street(6, 7, 2.0),
    ];
    let inst = TwoVrpInstance::new(customers, Depots::shared(0), [4.0, 3.0], Arc::new([first, second]))?;

    let sol = solve_2vrp_exact(&inst)?;
    print!("{}", solution_to_text(&sol));
    println!("loads {:?}, feasible {}", sol.loads, evaluate_2vrp(&inst, &sol).feasible);
    println!("brute force cost {}", oracle_2vrp(&inst)?.cost);
    Ok(())
}
