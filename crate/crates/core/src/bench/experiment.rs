//! Seeded batch runs of the 2VRP heuristic.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use super::files::read_bundle;
use super::stats::{checkpoint_summary, validate_checkpoints, CheckpointStats};
use crate::generator::{generate_2tsp_instance, seeded_rng, GeneratorParams};
use crate::sliding::{two_vrp_heuristic, HeuristicOptions, LogRow, SearchOptions, SlidingParams, StartGenerator, SweepOrder};
use crate::two_tsp::{Balance, TwoTspInstance};
use crate::vrp::{map_2tsp_to_2vrp, random_2vrp_instance, TwoVrpInstance};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Generated permuted Kalmanson 2TSPs with `n` nodes and `fixed` fixed nodes.
    Kalmanson2Tsp { n: usize, fixed: usize },
    /// Random 2VRPs with `n` customers; no optimum is known.
    Random2Vrp { n: usize },
    /// Bundle files (paths to `.matrix` files).
    External(Vec<PathBuf>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Ks,
    Random,
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub family: Family,
    pub count: usize,
    pub params: SlidingParams,
    pub generator: GeneratorKind,
    pub repetitions: usize,
    pub checkpoints: Vec<usize>,
    pub seed: u64,
    pub order: SweepOrder,
    /// Stop an instance once its known optimum is reached; later
    /// checkpoints reuse the final value.
    pub stop_at_optimum: bool,
    pub audit: bool,
}

#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub id: String,
    pub optimum: Option<f64>,
    pub best_cost: Option<f64>,
    pub best_by_repetition: Vec<f64>,
    pub log: Vec<LogRow>,
    pub elapsed_ms: u128,
    pub audit_failures: Vec<String>,
    pub non_monotone: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub instances: Vec<InstanceResult>,
    /// Present when every instance has a known optimum.
    pub checkpoints: Vec<CheckpointStats>,
}

struct Prepared {
    id: String,
    vrp: TwoVrpInstance,
    tsp: Option<TwoTspInstance>,
    optimum: Option<f64>,
}

fn prepare(spec: &ExperimentSpec, k: usize) -> Result<Prepared> {
    let seed = spec.seed.wrapping_add(k as u64);
    match &spec.family {
        Family::Kalmanson2Tsp { n, fixed } => {
            let g = generate_2tsp_instance(&GeneratorParams::new(*n, seed), *fixed, Balance::Exact)?;
            let vrp = map_2tsp_to_2vrp(&g.instance)?.instance;
            Ok(Prepared { id: format!("k{n}-{fixed}-{seed}"), vrp, tsp: Some(g.instance), optimum: Some(g.optimum) })
        }
        Family::Random2Vrp { n } => {
            let vrp = random_2vrp_instance(&mut seeded_rng(seed), *n);
            Ok(Prepared { id: format!("r{n}-{seed}"), vrp, tsp: None, optimum: None })
        }
        Family::External(paths) => {
            let path = paths.get(k).ok_or_else(|| Error::InvalidParams("fewer bundle files than count".into()))?;
            let bundle = read_bundle(path)?;
            let tsp = bundle.instance()?;
            let vrp = map_2tsp_to_2vrp(&tsp)?.instance;
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(Prepared { id, vrp, tsp: Some(tsp), optimum: bundle.optimum })
        }
    }
}

fn run_one(spec: &ExperimentSpec, k: usize) -> InstanceResult {
    let clock = Instant::now();
    let failed = |id: String, e: Error| InstanceResult {
        id,
        optimum: None,
        best_cost: None,
        best_by_repetition: Vec::new(),
        log: Vec::new(),
        elapsed_ms: 0,
        audit_failures: Vec::new(),
        non_monotone: 0,
        error: Some(e.to_string()),
    };
    let p = match prepare(spec, k) {
        Ok(p) => p,
        Err(e) => return failed(format!("#{k}"), e),
    };
    let generator = match (spec.generator, &p.tsp) {
        (GeneratorKind::Ks, Some(t)) => StartGenerator::Ks(t),
        (GeneratorKind::Ks, None) => {
            return failed(p.id, Error::InvalidParams("KS starts need a 2TSP family".into()));
        }
        (GeneratorKind::Random, _) => StartGenerator::Random,
    };
    let opts = HeuristicOptions {
        search: SearchOptions { order: spec.order, audit: spec.audit },
        instance_id: p.id.clone(),
        optimum: p.optimum,
        stop_at: if spec.stop_at_optimum { p.optimum } else { None },
    };
    let run_seed = spec.seed ^ (k as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    match two_vrp_heuristic(&p.vrp, spec.params, generator, spec.repetitions, run_seed, &opts) {
        Ok(out) => InstanceResult {
            id: p.id,
            optimum: p.optimum,
            best_cost: Some(out.best.cost),
            best_by_repetition: out.best_by_repetition,
            log: out.log,
            elapsed_ms: clock.elapsed().as_millis(),
            audit_failures: out.stats.audit_failures,
            non_monotone: out.non_monotone,
            error: None,
        },
        Err(e) => failed(p.id, e),
    }
}

/// Runs every instance; a failing instance is reported and the rest go on.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    validate_checkpoints(&spec.checkpoints)?;
    if spec.count == 0 || spec.repetitions == 0 {
        return Err(Error::InvalidParams("count and repetitions must be positive".into()));
    }
    let instances: Vec<InstanceResult> = (0..spec.count).into_par_iter().map(|k| run_one(spec, k)).collect();
    let solved: Vec<&InstanceResult> = instances.iter().filter(|r| r.error.is_none()).collect();
    let checkpoints = if !solved.is_empty() && solved.iter().all(|r| r.optimum.is_some()) {
        let runs: Vec<Vec<f64>> = solved.iter().map(|r| r.best_by_repetition.clone()).collect();
        let optima: Vec<f64> = solved.iter().map(|r| r.optimum.unwrap()).collect();
        checkpoint_summary(&runs, &optima, &spec.checkpoints)?
    } else {
        Vec::new()
    };
    Ok(ExperimentReport { instances, checkpoints })
}

pub fn write_checkpoint_csv<W: Write>(w: W, stats: &[CheckpointStats]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "iteration", "count", "mean", "min", "lower_whisker", "q1", "median", "q3", "upper_whisker", "max",
        "count_optimal",
    ])?;
    for s in stats {
        let b = &s.gaps;
        let nums = [b.mean, b.min, b.lower_whisker, b.q1, b.median, b.q3, b.upper_whisker, b.max];
        let mut rec = vec![s.iteration.to_string(), b.count.to_string()];
        rec.extend(nums.iter().map(|v| v.to_string()));
        rec.push(s.count_optimal.to_string());
        wr.write_record(rec)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_instance_csv<W: Write>(w: W, results: &[InstanceResult]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["instance_id", "optimum", "best_cost", "gap_percent", "repetitions", "elapsed_ms", "error"])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in results {
        let gap = r.optimum.zip(r.best_cost).map(|(o, b)| super::stats::gap_percent(b, o));
        wr.write_record([
            r.id.clone(),
            opt(r.optimum),
            opt(r.best_cost),
            opt(gap),
            r.best_by_repetition.len().to_string(),
            r.elapsed_ms.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ExperimentSpec {
        ExperimentSpec {
            family: Family::Kalmanson2Tsp { n: 12, fixed: 4 },
            count: 3,
            params: SlidingParams { s: 3, l: 1 },
            generator: GeneratorKind::Random,
            repetitions: 5,
            checkpoints: vec![1, 5],
            seed: 1,
            order: SweepOrder::Restart,
            stop_at_optimum: true,
            audit: true,
        }
    }

    #[test]
    fn small_experiment() {
        let r = run_experiment(&spec()).unwrap();
        assert_eq!(r.instances.len(), 3);
        assert!(r.instances.iter().all(|i| i.error.is_none() && i.audit_failures.is_empty()));
        assert_eq!(r.checkpoints.len(), 2);
        assert!(r.checkpoints[0].count_optimal <= r.checkpoints[1].count_optimal);
    }

    #[test]
    fn empty_checkpoints_rejected() {
        let mut s = spec();
        s.checkpoints.clear();
        assert!(run_experiment(&s).unwrap_err().to_string().contains("no checkpoints"));
    }

    #[test]
    fn ks_needs_two_tsp() {
        let mut s = spec();
        s.family = Family::Random2Vrp { n: 6 };
        s.generator = GeneratorKind::Ks;
        s.count = 1;
        let r = run_experiment(&s).unwrap();
        assert!(r.instances[0].error.is_some());
    }
}
