use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tworoute::bench::{
    self, read_bundle, read_two_tour_solution, two_tour_solution_to_text, write_bundle, ExperimentSpec, Family,
    GeneratorKind, InstanceBundle,
};
use tworoute::generator::{generate_2tsp_instance, seeded_rng, GeneratorParams};
use tworoute::knn::ks_heuristic;
use tworoute::sliding::{two_vrp_heuristic, write_log_csv, HeuristicOptions, SlidingParams, StartGenerator, SweepOrder};
use tworoute::two_tsp::{
    evaluate_solution, oracle_2tsp, solve_balanced_2tsp, solve_balanced_2tsp_lowmem_tours, Balance, TwoTourSolution,
};
use tworoute::vrp::io::{parse_solution, solution_to_text};
use tworoute::vrp::{evaluate_2vrp, map_2tsp_to_2vrp, oracle_2vrp, random_2vrp_instance, solve_2vrp_exact, TwoVrpInstance};
use tworoute::Error;

/// Two-vehicle routing: exact solvers, heuristics and benchmarks.
///
/// Exit codes: 0 success, 1 usage or invalid input, 2 infeasible,
/// 3 size guard exceeded, 4 I/O or parse failure. The exact 2VRP solver's
/// subset limit can be raised with TWOROUTE_MAX_SUBSET_BITS.
#[derive(Parser)]
#[command(name = "tworoute", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance files.
    Gen(GenArgs),
    /// Solve one instance.
    Solve(SolveArgs),
    /// Check a solution against its instance.
    Verify(VerifyArgs),
    /// Run a seeded batch and write CSV summaries.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Kalmanson2tsp,
    Random2vrp,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "kalmanson2tsp")]
    family: FamilyArg,
    /// Nodes (2TSP) or customers (2VRP).
    #[arg(long)]
    n: usize,
    /// Fixed nodes, node 1 included.
    #[arg(long, default_value_t = 1)]
    fixed: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Leave optimum and hidden order out of the info file.
    #[arg(long)]
    blind: bool,
    /// Allow odd n + fixed (tour sizes differ by one).
    #[arg(long)]
    near_balanced: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(name = "2tsp-exact")]
    TspExact,
    #[value(name = "2tsp-lowmem")]
    TspLowmem,
    #[value(name = "2tsp-oracle")]
    TspOracle,
    Ks,
    #[value(name = "2vrp-exact")]
    VrpExact,
    #[value(name = "2vrp-oracle")]
    VrpOracle,
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StartArg {
    Ksh,
    Rndh,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Restart,
    Continue,
}

impl From<OrderArg> for SweepOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Restart => SweepOrder::Restart,
            OrderArg::Continue => SweepOrder::Continue,
        }
    }
}

#[derive(Args)]
struct HeuristicArgs {
    /// Window size of the sliding search.
    #[arg(long, default_value_t = 3)]
    s: usize,
    /// Window step.
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, value_enum, default_value = "rndh")]
    generator: StartArg,
    #[arg(long, default_value_t = 10)]
    repetitions: usize,
    #[arg(long, value_enum, default_value = "restart")]
    order: OrderArg,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    mode: Mode,
    /// A bundle `.matrix` file, or a 2VRP instance file.
    instance: PathBuf,
    /// Solution output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Required by the heuristic.
    #[arg(long)]
    seed: Option<u64>,
    /// Per-iteration log CSV for the heuristic.
    #[arg(long)]
    log: Option<PathBuf>,
    #[command(flatten)]
    heuristic: HeuristicArgs,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    solution: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum, default_value = "kalmanson2tsp")]
    family: FamilyArg,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 30)]
    fixed: usize,
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Directory of bundles to use instead of generated instances.
    #[arg(long)]
    bundles: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    /// Comma-separated iteration checkpoints.
    #[arg(long, default_value = "1,5,10,20,30,40,50,60,70,80,90,100")]
    checkpoints: String,
    /// CSV with `instance_id,value` reference costs.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Keep iterating after the known optimum is reached.
    #[arg(long)]
    no_early_stop: bool,
    #[arg(long, default_value = "experiment-out")]
    out: PathBuf,
    #[command(flatten)]
    heuristic: HeuristicArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 2,
        Error::SizeGuard(_) => 3,
        Error::Io(_) | Error::Parse { .. } | Error::Csv(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn generate(a: GenArgs) -> Result<u8, Error> {
    for k in 0..a.count {
        let seed = a.seed.wrapping_add(k as u64);
        let name = format!("inst-{:03}", k + 1);
        match a.family {
            FamilyArg::Kalmanson2tsp => {
                let balance = if a.near_balanced { Balance::Near } else { Balance::Exact };
                let g = generate_2tsp_instance(&GeneratorParams::new(a.n, seed), a.fixed, balance)?;
                let bundle = InstanceBundle {
                    matrix: g.instance.matrix().clone(),
                    fixed: g.instance.fixed_nodes(),
                    optimum: Some(g.optimum),
                    hidden_order: Some(g.generated.hidden_order.clone()),
                    balance,
                };
                write_bundle(&a.out, &name, &bundle, a.blind)?;
            }
            FamilyArg::Random2vrp => {
                fs::create_dir_all(&a.out)?;
                let inst = random_2vrp_instance(&mut seeded_rng(seed), a.n);
                fs::write(a.out.join(format!("{name}.vrp")), inst.to_text())?;
            }
        }
    }
    println!("wrote {} instance(s) to {}", a.count, a.out.display());
    Ok(0)
}

fn is_bundle(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "matrix")
}

/// A 2VRP from a 2VRP file, or the mapped form of a bundle.
fn load_vrp(path: &Path) -> Result<(TwoVrpInstance, Option<InstanceBundle>), Error> {
    if is_bundle(path) {
        let bundle = read_bundle(path)?;
        let vrp = map_2tsp_to_2vrp(&bundle.instance()?)?.instance;
        Ok((vrp, Some(bundle)))
    } else {
        Ok((fs::read_to_string(path)?.parse()?, None))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report(cost: f64, optimum: Option<f64>, clock: Instant) {
    let gap = optimum.map(|o| format!(" gap {:.3}%", bench::gap_percent(cost, o))).unwrap_or_default();
    eprintln!("cost {cost}{gap} time {}ms", clock.elapsed().as_millis());
}

fn solve(a: SolveArgs) -> Result<u8, Error> {
    let clock = Instant::now();
    match a.mode {
        Mode::TspExact | Mode::TspLowmem | Mode::TspOracle | Mode::Ks => {
            let bundle = read_bundle(&a.instance)?;
            let inst = bundle.instance()?;
            let sol: TwoTourSolution = match a.mode {
                Mode::TspExact => solve_balanced_2tsp(&inst)?,
                Mode::TspLowmem => solve_balanced_2tsp_lowmem_tours(&inst)?.1,
                Mode::TspOracle => oracle_2tsp(&inst)?,
                _ => ks_heuristic(&inst)?,
            };
            emit(&a.out, &two_tour_solution_to_text(&sol))?;
            report(sol.total, bundle.optimum, clock);
        }
        Mode::VrpExact | Mode::VrpOracle => {
            let (inst, bundle) = load_vrp(&a.instance)?;
            let sol = if a.mode == Mode::VrpExact { solve_2vrp_exact(&inst)? } else { oracle_2vrp(&inst)? };
            emit(&a.out, &solution_to_text(&sol))?;
            report(sol.cost, bundle.and_then(|b| b.optimum), clock);
        }
        Mode::Heuristic => {
            let seed = a.seed.ok_or_else(|| Error::InvalidParams("--seed is required for the heuristic".into()))?;
            let (vrp, bundle) = load_vrp(&a.instance)?;
            let h = &a.heuristic;
            let tsp = bundle.as_ref().map(|b| b.instance()).transpose()?;
            let generator = match (h.generator, &tsp) {
                (StartArg::Ksh, Some(t)) => StartGenerator::Ks(t),
                (StartArg::Ksh, None) => {
                    return Err(Error::InvalidParams("KS starts need a 2TSP bundle".into()));
                }
                (StartArg::Rndh, _) => StartGenerator::Random,
            };
            let optimum = bundle.as_ref().and_then(|b| b.optimum);
            let opts = HeuristicOptions {
                search: tworoute::sliding::SearchOptions { order: h.order.into(), audit: false },
                instance_id: a.instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                optimum,
                stop_at: None,
            };
            let params = SlidingParams::new(h.s, h.l)?;
            let out = two_vrp_heuristic(&vrp, params, generator, h.repetitions, seed, &opts)?;
            if let Some(p) = &a.log {
                write_log_csv(fs::File::create(p)?, &out.log)?;
            }
            emit(&a.out, &solution_to_text(&out.best))?;
            report(out.best.cost, optimum, clock);
        }
    }
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8, Error> {
    let text = fs::read_to_string(&a.solution)?;
    let (feasible, cost, violations) = if is_bundle(&a.instance) && !text.trim_start().starts_with("route1") {
        let inst = read_bundle(&a.instance)?.instance()?;
        let e = evaluate_solution(&inst, &read_two_tour_solution(&inst, &text)?);
        (e.feasible, e.total, e.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>())
    } else {
        let (inst, _) = load_vrp(&a.instance)?;
        let e = evaluate_2vrp(&inst, &parse_solution(&inst, &text)?);
        (e.feasible, e.cost, e.violations.iter().map(|v| v.to_string()).collect())
    };
    if feasible {
        println!("feasible cost {cost}");
        Ok(0)
    } else {
        println!("infeasible cost {cost}");
        for v in violations {
            println!("  {v}");
        }
        Ok(2)
    }
}

fn parse_checkpoints(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidParams(format!("bad checkpoint {t:?}"))))
        .collect()
}

fn read_reference(path: &Path) -> Result<Vec<(String, f64)>, Error> {
    let mut rd = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        if let (Some(id), Some(v)) = (rec.get(0), rec.get(1)) {
            if let Ok(v) = v.trim().parse::<f64>() {
                out.push((id.trim().to_string(), v));
            }
        }
    }
    Ok(out)
}

fn experiment(a: ExperimentArgs) -> Result<u8, Error> {
    let h = &a.heuristic;
    let (family, count) = match (&a.bundles, a.family) {
        (Some(dir), _) => {
            let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| is_bundle(p))
                .collect();
            paths.sort();
            let n = paths.len().min(a.count);
            (Family::External(paths), n)
        }
        (None, FamilyArg::Kalmanson2tsp) => (Family::Kalmanson2Tsp { n: a.n, fixed: a.fixed }, a.count),
        (None, FamilyArg::Random2vrp) => (Family::Random2Vrp { n: a.n }, a.count),
    };
    let spec = ExperimentSpec {
        family,
        count,
        params: SlidingParams::new(h.s, h.l)?,
        generator: if h.generator == StartArg::Ksh { GeneratorKind::Ks } else { GeneratorKind::Random },
        repetitions: h.repetitions,
        checkpoints: parse_checkpoints(&a.checkpoints)?,
        seed: a.seed,
        order: h.order.into(),
        stop_at_optimum: !a.no_early_stop,
        audit: false,
    };
    let report = bench::run_experiment(&spec)?;
    fs::create_dir_all(&a.out)?;
    let log: Vec<_> = report.instances.iter().flat_map(|r| r.log.iter().cloned()).collect();
    write_log_csv(fs::File::create(a.out.join("iterations.csv"))?, &log)?;
    bench::write_checkpoint_csv(fs::File::create(a.out.join("checkpoints.csv"))?, &report.checkpoints)?;
    bench::write_instance_csv(fs::File::create(a.out.join("instances.csv"))?, &report.instances)?;

    for r in report.instances.iter().filter(|r| r.error.is_some()) {
        eprintln!("instance {} failed: {}", r.id, r.error.as_deref().unwrap_or(""));
    }
    for c in &report.checkpoints {
        println!(
            "iteration {:>4}: mean {:.3}% median {:.3}% optimal {}/{}",
            c.iteration, c.gaps.mean, c.gaps.median, c.count_optimal, c.gaps.count
        );
    }
    if let Some(path) = &a.reference {
        let refs = read_reference(path)?;
        let (found, reference): (Vec<f64>, Vec<f64>) = report
            .instances
            .iter()
            .filter_map(|r| {
                let rv = refs.iter().find(|(id, _)| *id == r.id)?.1;
                Some((r.best_cost?, rv))
            })
            .unzip();
        match bench::table_summary(&found, &reference) {
            Some(t) => println!(
                "vs reference: mean {:.2}% best {:.2}% worst {:.2}% improved {}",
                t.mean_percent, t.best_percent, t.worst_percent, t.improved
            ),
            None => println!("vs reference: no matching instance ids"),
        }
    }
    println!("wrote CSV files to {}", a.out.display());
    Ok(0)
}
