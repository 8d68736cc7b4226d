//! Multi-start sliding-subset search on a mapped 2TSP with a known optimum.
//!
//!     cargo run --release --example sliding_heuristic -- 3 1 10

use tworoute::generator::{generate_2tsp_instance, GeneratorParams};
use tworoute::sliding::{two_vrp_heuristic, write_log_csv, HeuristicOptions, SlidingParams, StartGenerator};
use tworoute::two_tsp::Balance;
use tworoute::vrp::map_2tsp_to_2vrp;

fn main() -> tworoute::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let s = args.first().copied().unwrap_or(3);
    let l = args.get(1).copied().unwrap_or(1);
    let repetitions = args.get(2).copied().unwrap_or(10);

    let g = generate_2tsp_instance(&GeneratorParams::new(50, 3), 30, Balance::Exact)?;
    let mapped = map_2tsp_to_2vrp(&g.instance)?;
    println!("{} customers, optimum {:.6}", mapped.instance.n(), g.optimum);

    let opts = HeuristicOptions {
        instance_id: "k50-30-3".into(),
        optimum: Some(g.optimum),
        stop_at: Some(g.optimum),
        ..Default::default()
    };
    let params = SlidingParams::new(s, l)?;
    for (name, generator) in [("random starts", StartGenerator::Random), ("KS starts", StartGenerator::Ks(&g.instance))] {
        let out = two_vrp_heuristic(&mapped.instance, params, generator, repetitions, 11, &opts)?;
        println!(
            "{name}: best {:.6} after {} repetitions, {} sub-problems solved",
            out.best.cost,
            out.best_by_repetition.len(),
            out.stats.subproblems
        );
        if name == "random starts" {
            write_log_csv(std::io::stdout(), &out.log)?;
        }
    }
    Ok(())
}
