//! Instance files, summary statistics and the seeded experiment runner.

mod experiment;
mod files;
mod stats;

pub use experiment::{
    run_experiment, write_checkpoint_csv, write_instance_csv, ExperimentReport, ExperimentSpec, Family,
    GeneratorKind, InstanceResult,
};
pub use files::{
    bundle_paths, read_bundle, read_two_tour_solution, two_tour_solution_to_text, write_bundle, InstanceBundle,
};
pub use stats::{
    box_whisker, checkpoint_summary, default_checkpoints, gap_percent, table_summary, validate_checkpoints,
    BoxWhisker, CheckpointStats, TableSummary,
};
