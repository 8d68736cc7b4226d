//! Multi-start driver: generate a start, then alternate the sliding search
//! with per-route BELPERM until neither improves.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use super::{sliding_subset_search_with, SearchOptions, SearchStats, SlidingParams};
use crate::generator::SeededRng;
use crate::knn::ks_from_start;
use crate::matrices::{Costs, Permutation};
use crate::pyramidal::{belperm, strictly_less};
use crate::two_tsp::TwoTspInstance;
use crate::vrp::{
    evaluate_2vrp, map_2tsp_to_2vrp, Direction, MappedTwoTsp, TwoVrpInstance, TwoVrpSolution, Vehicle, Visit,
};
use crate::{Error, Result};

const RANDOM_START_RETRIES: usize = 1000;

/// Source of starting solutions.
#[derive(Debug, Clone, Copy)]
pub enum StartGenerator<'a> {
    /// KS heuristic on the underlying 2TSP; repetition `r` uses KNN start
    /// node `r mod (n - 1) + 1`.
    Ks(&'a TwoTspInstance),
    /// Random feasible assignment, order and directions.
    Random,
}

#[derive(Debug, Clone, Default)]
pub struct HeuristicOptions {
    pub search: SearchOptions,
    /// Label written to the log.
    pub instance_id: String,
    /// Known optimum, for the gap column.
    pub optimum: Option<f64>,
    /// Stop early once the best cost is within rounding of this value.
    pub stop_at: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub instance_id: String,
    pub repetition: usize,
    pub iteration: usize,
    pub best_cost: f64,
    pub gap_percent: Option<f64>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone)]
pub struct HeuristicOutcome {
    pub best: TwoVrpSolution,
    pub log: Vec<LogRow>,
    /// Best cost seen after each completed repetition.
    pub best_by_repetition: Vec<f64>,
    pub stats: SearchStats,
    /// Times a sliding search returned something costlier than its input.
    pub non_monotone: usize,
}

fn gap(found: f64, optimum: Option<f64>) -> Option<f64> {
    optimum.map(|o| 100.0 * (found - o) / o)
}

fn repetition_seed(seed: u64, repetition: usize) -> u64 {
    seed ^ (repetition as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn two_vrp_heuristic(
    inst: &TwoVrpInstance,
    params: SlidingParams,
    generator: StartGenerator<'_>,
    repetitions: usize,
    seed: u64,
    opts: &HeuristicOptions,
) -> Result<HeuristicOutcome> {
    if repetitions == 0 {
        return Err(Error::InvalidParams("at least one repetition is needed".into()));
    }
    let mapped = match generator {
        StartGenerator::Ks(tsp) => {
            let m = map_2tsp_to_2vrp(tsp)?;
            if m.instance.customers != inst.customers || m.instance.costs != inst.costs {
                return Err(Error::InvalidParams("KS starts need the 2VRP built from the given 2TSP".into()));
            }
            Some(m)
        }
        StartGenerator::Random => None,
    };
    let clock = Instant::now();
    let mut best: Option<TwoVrpSolution> = None;
    let mut log = Vec::new();
    let mut best_by_repetition = Vec::with_capacity(repetitions);
    let mut stats = SearchStats::default();
    let mut non_monotone = 0;

    for r in 0..repetitions {
        let mut current = match (&generator, &mapped) {
            (StartGenerator::Ks(tsp), Some(m)) => {
                let start = r % (tsp.n() - 1) + 1;
                let sol = ks_from_start(tsp, start)?;
                tours_to_routes(m, &sol.tour1, &sol.tour2)?
            }
            _ => {
                let mut rng = SeededRng::seed_from_u64(repetition_seed(seed, r));
                random_feasible_solution(inst, &mut rng)?
            }
        };
        let mut iteration = 0;
        loop {
            iteration += 1;
            let (slid, s) = sliding_subset_search_with(inst, &current, params, &opts.search)?;
            stats.absorb(s);
            if slid.cost > current.cost {
                non_monotone += 1;
            }
            let polished = improve_routes_belperm(inst, &slid);
            if opts.search.audit && !evaluate_2vrp(inst, &polished).feasible {
                stats.audit_failures.push(format!("repetition {r}: route polishing broke feasibility"));
            }
            let improved = strictly_less(polished.cost, current.cost);
            if polished.cost <= current.cost {
                current = polished;
            }
            if best.as_ref().is_none_or(|b| current.cost < b.cost) {
                best = Some(current.clone());
            }
            let best_cost = best.as_ref().map(|b| b.cost).unwrap();
            log.push(LogRow {
                instance_id: opts.instance_id.clone(),
                repetition: r + 1,
                iteration,
                best_cost,
                gap_percent: gap(best_cost, opts.optimum),
                elapsed_ms: clock.elapsed().as_millis(),
            });
            if !improved {
                break;
            }
        }
        let best_cost = best.as_ref().map(|b| b.cost).unwrap();
        best_by_repetition.push(best_cost);
        if opts.stop_at.is_some_and(|t| !strictly_less(t, best_cost)) {
            break;
        }
    }
    Ok(HeuristicOutcome { best: best.expect("one repetition ran"), log, best_by_repetition, stats, non_monotone })
}

/// Turns two 2TSP tours into routes of the mapped 2VRP.
pub fn tours_to_routes(mapped: &MappedTwoTsp, tour1: &[usize], tour2: &[usize]) -> Result<TwoVrpSolution> {
    let inst = &mapped.instance;
    let mut taken = vec![false; inst.n()];
    let mut routes: [Vec<Visit>; 2] = Default::default();
    for (m, tour) in [tour1, tour2].into_iter().enumerate() {
        let vehicle = Vehicle::from_index(m);
        for &node in tour.iter().filter(|&&v| v != 0) {
            let k = (0..inst.n())
                .find(|&k| !taken[k] && mapped.node_of[k] == node && inst.customers[k].allows(vehicle))
                .ok_or_else(|| Error::InvalidInstance(format!("tour node {} has no matching customer", node + 1)))?;
            taken[k] = true;
            routes[m].push(Visit::new(k, Direction::Forward));
        }
    }
    let [r1, r2] = routes;
    Ok(inst.solution_from_routes(r1, r2))
}

/// Random start: shuffled customers, each put on a vehicle with room left
/// (fixed customers on their own vehicle), random traversal directions.
pub fn random_feasible_solution<R: Rng>(inst: &TwoVrpInstance, rng: &mut R) -> Result<TwoVrpSolution> {
    let n = inst.n();
    'attempt: for _ in 0..RANDOM_START_RETRIES {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        // Fixed customers claim capacity first.
        order.sort_by_key(|&k| inst.customers[k].fixed_to.is_none());
        let mut load = [0.0; 2];
        let mut routes: [Vec<Visit>; 2] = Default::default();
        for &k in &order {
            let c = &inst.customers[k];
            let fits: Vec<usize> = (0..2)
                .filter(|&m| c.allows(Vehicle::from_index(m)) && load[m] + c.demand <= inst.capacity[m])
                .filter(|&m| c.internal[m].iter().any(|v| v.is_finite()))
                .collect();
            let Some(&m) = fits.choose(rng) else { continue 'attempt };
            let dirs: Vec<Direction> = [Direction::Forward, Direction::Backward]
                .into_iter()
                .filter(|d| c.internal[m][d.index()].is_finite())
                .collect();
            let dir = *dirs.choose(rng).expect("a finite direction");
            load[m] += c.demand;
            routes[m].push(Visit::new(k, dir));
        }
        for r in routes.iter_mut() {
            r.shuffle(rng);
        }
        if routes[0].is_empty() && n > 0 && !inst.allow_empty_first {
            continue;
        }
        let [r1, r2] = routes;
        let sol = inst.solution_from_routes(r1, r2);
        if sol.cost.is_finite() {
            return Ok(sol);
        }
    }
    Err(Error::Infeasible(format!("no random feasible start after {RANDOM_START_RETRIES} attempts")))
}

/// One route seen as a closed tour through a virtual depot node 0.
struct RouteCosts<'a> {
    inst: &'a TwoVrpInstance,
    vehicle: Vehicle,
    route: &'a [Visit],
}

impl Costs for RouteCosts<'_> {
    fn order(&self) -> usize {
        self.route.len() + 1
    }

    fn cost(&self, i: usize, j: usize) -> f64 {
        let m = self.vehicle.index();
        let c = &self.inst.costs[m];
        let d = &self.inst.depots;
        if i == j {
            return 0.0;
        }
        let (from, leave) = if i == 0 {
            (d.start[m], 0.0)
        } else {
            let v = self.route[i - 1];
            let cu = &self.inst.customers[v.customer];
            (cu.exit(v.direction), cu.traversal(self.vehicle, v.direction))
        };
        let to = if j == 0 {
            d.end[m]
        } else {
            let v = self.route[j - 1];
            self.inst.customers[v.customer].entry(v.direction)
        };
        leave + c.get(from, to)
    }
}

/// BELPERM on each route with its depots pinned; customer directions kept.
pub fn improve_routes_belperm(inst: &TwoVrpInstance, sol: &TwoVrpSolution) -> TwoVrpSolution {
    let mut routes = sol.routes.clone();
    for (m, route) in routes.iter_mut().enumerate() {
        if route.len() < 3 {
            continue;
        }
        let view = RouteCosts { inst, vehicle: Vehicle::from_index(m), route };
        let tour = belperm(&view, &Permutation::identity(route.len() + 1));
        *route = tour.nodes[1..].iter().map(|&k| view.route[k - 1]).collect();
    }
    let [r1, r2] = routes;
    let out = inst.solution_from_routes(r1, r2);
    if out.cost <= sol.cost {
        out
    } else {
        sol.clone()
    }
}

pub fn write_log_csv<W: Write>(w: W, rows: &[LogRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["instance_id", "repetition", "iteration", "best_cost", "gap_percent", "elapsed_ms"])?;
    for r in rows {
        wr.write_record([
            r.instance_id.clone(),
            r.repetition.to_string(),
            r.iteration.to_string(),
            r.best_cost.to_string(),
            r.gap_percent.map(|g| g.to_string()).unwrap_or_default(),
            r.elapsed_ms.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_2tsp_instance, GeneratorParams};
    use crate::two_tsp::Balance;

    #[test]
    fn ks_start_reaches_known_optimum() {
        let g = generate_2tsp_instance(&GeneratorParams::new(12, 8), 4, Balance::Exact).unwrap();
        let mapped = map_2tsp_to_2vrp(&g.instance).unwrap();
        let opts = HeuristicOptions { optimum: Some(g.optimum), ..Default::default() };
        let out = two_vrp_heuristic(
            &mapped.instance,
            SlidingParams { s: 3, l: 1 },
            StartGenerator::Ks(&g.instance),
            1,
            0,
            &opts,
        )
        .unwrap();
        assert!((out.best.cost - g.optimum).abs() < 1e-9 * g.optimum);
        assert_eq!(out.log[0].repetition, 1);
    }

    #[test]
    fn random_heuristic_is_deterministic() {
        let g = generate_2tsp_instance(&GeneratorParams::new(12, 5), 4, Balance::Exact).unwrap();
        let mapped = map_2tsp_to_2vrp(&g.instance).unwrap();
        let run = || {
            two_vrp_heuristic(
                &mapped.instance,
                SlidingParams { s: 3, l: 1 },
                StartGenerator::Random,
                3,
                77,
                &HeuristicOptions::default(),
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        let strip = |o: &HeuristicOutcome| o.log.iter().map(|r| (r.repetition, r.iteration, r.best_cost)).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        assert!(a.best_by_repetition.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn log_csv_header() {
        let mut buf = Vec::new();
        write_log_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), "instance_id,repetition,iteration,best_cost,gap_percent,elapsed_ms");
    }
}
