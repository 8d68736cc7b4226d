//! A small seeded batch: gap statistics at checkpoints, as CSV on stdout.
//!
//!     cargo run --release --example convergence_experiment -- 5 20

use tworoute::bench::{default_checkpoints, run_experiment, write_checkpoint_csv, ExperimentSpec, Family, GeneratorKind};
use tworoute::sliding::{SlidingParams, SweepOrder};

fn main() -> tworoute::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let count = args.first().copied().unwrap_or(5);
    let repetitions = args.get(1).copied().unwrap_or(20);
    let spec = ExperimentSpec {
        family: Family::Kalmanson2Tsp { n: 30, fixed: 10 },
        count,
        params: SlidingParams::new(3, 1)?,
        generator: GeneratorKind::Random,
        repetitions,
        checkpoints: default_checkpoints(repetitions),
        seed: 5,
        order: SweepOrder::Continue,
        stop_at_optimum: true,
        audit: false,
    };
    let report = run_experiment(&spec)?;
    for r in &report.instances {
        eprintln!("{}: best {:?} vs optimum {:?} in {} ms", r.id, r.best_cost, r.optimum, r.elapsed_ms);
    }
    write_checkpoint_csv(std::io::stdout(), &report.checkpoints)
}
