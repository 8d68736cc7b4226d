//! Sliding-subset local search for the 2VRP.
//!
//! Both routes are laid out as one sequence `route1 ++ route2`. Two windows
//! of `s` consecutive customers are freed; every stretch between or after
//! them is collapsed into a single aggregated customer, the stretch before
//! the first window is glued onto vehicle 1's start depot, and the small
//! instance that remains is solved exactly. An improvement is expanded back
//! into full routes.

mod heuristic;

pub use heuristic::{
    improve_routes_belperm, random_feasible_solution, tours_to_routes, two_vrp_heuristic, write_log_csv, HeuristicOptions,
    HeuristicOutcome, LogRow, StartGenerator,
};

use std::sync::Arc;

use crate::pyramidal::strictly_less;
use crate::vrp::{
    evaluate_2vrp, max_subset_bits, solve_2vrp_exact_with_limit, Customer, Direction, TwoVrpInstance,
    TwoVrpSolution, Vehicle, Visit,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlidingParams {
    /// Window size.
    pub s: usize,
    /// Slide step.
    pub l: usize,
}

impl SlidingParams {
    pub fn new(s: usize, l: usize) -> Result<Self> {
        if s == 0 || l == 0 {
            return Err(Error::InvalidParams("window size and step must be positive".into()));
        }
        let p = SlidingParams { s, l };
        if p.target_size() + 1 > max_subset_bits() {
            return Err(Error::InvalidParams(format!(
                "window size {s} needs sub-problems beyond the exact solver's limit"
            )));
        }
        Ok(p)
    }

    /// Customers per sub-problem, counting the separator and both depots.
    pub fn target_size(&self) -> usize {
        2 * self.s + 6
    }
}

/// What to do after a sub-problem improves the incumbent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// Start again from the first window pair.
    #[default]
    Restart,
    /// Carry on from the next window pair; stop after a full cycle without
    /// improvement. Reaches the same kind of local optimum, usually a few
    /// times faster.
    Continue,
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub order: SweepOrder,
    /// Check every intermediate solution with the evaluator and the
    /// sub-problem cost bookkeeping.
    pub audit: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchStats {
    pub subproblems: usize,
    pub improvements: usize,
    /// Problems found while auditing; empty when everything checked out.
    pub audit_failures: Vec<String>,
}

impl SearchStats {
    pub fn absorb(&mut self, other: SearchStats) {
        self.subproblems += other.subproblems;
        self.improvements += other.improvements;
        self.audit_failures.extend(other.audit_failures);
    }
}

/// A subpath collapsed into one customer, with the visits it stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedCustomer {
    pub customer: Customer,
    pub members: Vec<Visit>,
}

/// Collapses a directed subpath. Traversing the result forward replays the
/// subpath; backward replays it reversed with every member flipped.
pub fn aggregate_subpath(inst: &TwoVrpInstance, subpath: &[Visit]) -> Result<AggregatedCustomer> {
    let (Some(first), Some(last)) = (subpath.first(), subpath.last()) else {
        return Err(Error::InvalidParams("cannot aggregate an empty subpath".into()));
    };
    let cust = |v: &Visit| &inst.customers[v.customer];
    let mut internal = [[0.0; 2]; 2];
    let mut demand = 0.0;
    let mut fixed_to = None;
    for v in subpath {
        let c = cust(v);
        demand += c.demand;
        if let Some(f) = c.fixed_to {
            if fixed_to.is_some_and(|g| g != f) {
                return Err(Error::InvalidInstance("subpath mixes customers fixed to different vehicles".into()));
            }
            fixed_to = Some(f);
        }
    }
    for m in 0..2 {
        let vehicle = Vehicle::from_index(m);
        let c = &inst.costs[m];
        let mut fwd = 0.0;
        let mut bwd = 0.0;
        for (k, v) in subpath.iter().enumerate() {
            fwd += cust(v).traversal(vehicle, v.direction);
            bwd += cust(v).traversal(vehicle, v.direction.flipped());
            if let Some(next) = subpath.get(k + 1) {
                fwd += c.get(cust(v).exit(v.direction), cust(next).entry(next.direction));
                bwd += c.get(cust(next).entry(next.direction), cust(v).exit(v.direction));
            }
        }
        internal[m] = [fwd, bwd];
    }
    Ok(AggregatedCustomer {
        customer: Customer {
            left: cust(first).entry(first.direction),
            right: cust(last).exit(last.direction),
            internal,
            demand,
            fixed_to,
        },
        members: subpath.to_vec(),
    })
}

/// A reduced instance plus what is needed to expand its solutions.
struct SubProblem {
    instance: TwoVrpInstance,
    parts: Vec<Vec<Visit>>,
    prefix: Vec<Visit>,
}

impl SubProblem {
    fn new(inst: &TwoVrpInstance, prefix: &[Visit], pieces: Vec<Vec<Visit>>) -> Result<Self> {
        let mut customers = Vec::with_capacity(pieces.len());
        for piece in &pieces {
            customers.push(aggregate_subpath(inst, piece)?.customer);
        }
        let mut depots = inst.depots;
        let mut capacity = inst.capacity;
        let mut allow_empty_first = inst.allow_empty_first;
        if let Some(last) = prefix.last() {
            depots.start[0] = inst.customers[last.customer].exit(last.direction);
            capacity[0] -= prefix.iter().map(|v| inst.customers[v.customer].demand).sum::<f64>();
            allow_empty_first = true;
        }
        let instance = TwoVrpInstance {
            customers,
            depots,
            capacity,
            costs: Arc::clone(&inst.costs),
            allow_empty_first,
        };
        Ok(SubProblem { instance, parts: pieces, prefix: prefix.to_vec() })
    }

    fn expand(&self, sol: &TwoVrpSolution) -> [Vec<Visit>; 2] {
        let mut routes = [self.prefix.clone(), Vec::new()];
        for m in 0..2 {
            for v in &sol.routes[m] {
                let part = &self.parts[v.customer];
                match v.direction {
                    Direction::Forward => routes[m].extend_from_slice(part),
                    Direction::Backward => routes[m]
                        .extend(part.iter().rev().map(|p| Visit::new(p.customer, p.direction.flipped()))),
                }
            }
        }
        routes
    }
}

/// Start positions `(a, b)` of the two windows in the flattened sequence of
/// `total` customers whose first `k1` ride on vehicle 1.
pub fn window_pairs(k1: usize, total: usize, params: SlidingParams) -> Vec<(usize, usize)> {
    let SlidingParams { s, l } = params;
    let mut out = Vec::new();
    if total < 2 * s {
        return out;
    }
    let k2 = total - k1;
    let mut a = 0;
    while a + 2 * s <= total && (a < k1 || (k1 == 0 && a == 0)) {
        let b0 = if k2 > 0 { (a + s).max((k1 + 1).saturating_sub(s)) } else { a + s };
        let mut b = b0;
        while b + s <= total {
            out.push((a, b));
            b += l;
        }
        if total - s >= b0 && out.last() != Some(&(a, total - s)) {
            out.push((a, total - s));
        }
        a += l;
    }
    out
}

/// Splits the flattened routes into prefix, windows and aggregated stretches.
fn decompose(flat: &[Visit], k1: usize, a: usize, b: usize, s: usize) -> (Vec<Visit>, Vec<Vec<Visit>>) {
    let prefix = flat[..a].to_vec();
    let mut pieces: Vec<Vec<Visit>> = Vec::new();
    let singles = |pieces: &mut Vec<Vec<Visit>>, range: std::ops::Range<usize>| {
        pieces.extend(flat[range].iter().map(|v| vec![*v]));
    };
    singles(&mut pieces, a..a + s);
    let (g0, g1) = (a + s, b);
    let split = k1.clamp(g0, g1);
    let mut gap: Vec<&[Visit]> = [&flat[g0..split], &flat[split..g1]].into_iter().filter(|p| !p.is_empty()).collect();
    if gap.len() == 1 && gap[0].len() > 1 {
        // A gap inside one route: peel off its last customer.
        let g = gap[0];
        gap = vec![&g[..g.len() - 1], &g[g.len() - 1..]];
    }
    pieces.extend(gap.into_iter().map(|p| p.to_vec()));
    singles(&mut pieces, b..b + s);
    if b + s < flat.len() {
        pieces.push(flat[b + s..].to_vec());
    }
    (prefix, pieces)
}

pub fn sliding_subset_search(
    inst: &TwoVrpInstance,
    incumbent: &TwoVrpSolution,
    params: SlidingParams,
) -> Result<TwoVrpSolution> {
    sliding_subset_search_with(inst, incumbent, params, &SearchOptions::default()).map(|(s, _)| s)
}

pub fn sliding_subset_search_with(
    inst: &TwoVrpInstance,
    incumbent: &TwoVrpSolution,
    params: SlidingParams,
    opts: &SearchOptions,
) -> Result<(TwoVrpSolution, SearchStats)> {
    let mut stats = SearchStats::default();
    let bits = max_subset_bits();
    let mut current = inst.solution_from_routes(incumbent.routes[0].clone(), incumbent.routes[1].clone());
    let total = inst.n();

    if total + 3 <= params.target_size() {
        if total < bits {
            stats.subproblems += 1;
            let sol = solve_2vrp_exact_with_limit(inst, bits)?;
            if strictly_less(sol.cost, current.cost) {
                stats.improvements += 1;
                audit(inst, &sol, None, opts, &mut stats);
                current = sol;
            }
        }
        return Ok((current, stats));
    }

    let try_pair = |current: &TwoVrpSolution, flat: &[Visit], (a, b): (usize, usize), stats: &mut SearchStats| {
        let k1 = current.routes[0].len();
        let (prefix, pieces) = decompose(flat, k1, a, b, params.s);
        let sub = SubProblem::new(inst, &prefix, pieces)?;
        stats.subproblems += 1;
        let sub_sol = match solve_2vrp_exact_with_limit(&sub.instance, bits) {
            Ok(s) => s,
            Err(Error::Infeasible(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let [r1, r2] = sub.expand(&sub_sol);
        let full = inst.solution_from_routes(r1, r2);
        if !strictly_less(full.cost, current.cost) {
            return Ok(None);
        }
        stats.improvements += 1;
        let constant = prefix_cost(inst, &sub.prefix);
        audit(inst, &full, Some(sub_sol.cost + constant), opts, stats);
        Ok(Some(full))
    };
    let layout = |sol: &TwoVrpSolution| {
        let flat: Vec<Visit> = sol.routes[0].iter().chain(&sol.routes[1]).copied().collect();
        (window_pairs(sol.routes[0].len(), total, params), flat)
    };

    let (mut pairs, mut flat) = layout(&current);
    match opts.order {
        SweepOrder::Restart => 'sweep: loop {
            for &pair in &pairs {
                if let Some(better) = try_pair(&current, &flat, pair, &mut stats)? {
                    current = better;
                    (pairs, flat) = layout(&current);
                    continue 'sweep;
                }
            }
            break;
        },
        SweepOrder::Continue => {
            let (mut cursor, mut quiet) = (0, 0);
            while quiet < pairs.len() {
                let pair = pairs[cursor % pairs.len()];
                cursor += 1;
                match try_pair(&current, &flat, pair, &mut stats)? {
                    Some(better) => {
                        current = better;
                        (pairs, flat) = layout(&current);
                        quiet = 0;
                    }
                    None => quiet += 1,
                }
            }
        }
    }
    Ok((current, stats))
}

/// Cost of vehicle 1 from its start depot through `prefix`, up to the exit
/// of the last prefix customer.
fn prefix_cost(inst: &TwoVrpInstance, prefix: &[Visit]) -> f64 {
    let c = &inst.costs[0];
    let mut at = inst.depots.start[0];
    let mut cost = 0.0;
    for v in prefix {
        let cust = &inst.customers[v.customer];
        cost += c.get(at, cust.entry(v.direction)) + cust.traversal(Vehicle::First, v.direction);
        at = cust.exit(v.direction);
    }
    cost
}

fn audit(inst: &TwoVrpInstance, sol: &TwoVrpSolution, reported: Option<f64>, opts: &SearchOptions, stats: &mut SearchStats) {
    if !opts.audit {
        return;
    }
    let eval = evaluate_2vrp(inst, sol);
    if !eval.feasible {
        let msgs: Vec<String> = eval.violations.iter().map(|v| v.to_string()).collect();
        stats.audit_failures.push(format!("infeasible intermediate: {}", msgs.join("; ")));
    }
    if let Some(r) = reported {
        if (r - sol.cost).abs() > 1e-7 * r.abs().max(1.0) {
            stats.audit_failures.push(format!("sub-problem cost {r} expands to {}", sol.cost));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_2tsp_instance, GeneratorParams};
    use crate::two_tsp::Balance;
    use crate::vrp::map_2tsp_to_2vrp;
    use crate::vrp::testutil::random_instance;
    use rand::SeedableRng;

    #[test]
    fn single_customer_aggregate_is_identity() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(1);
        let inst = random_instance(&mut rng, 4);
        let agg = aggregate_subpath(&inst, &[Visit::new(2, Direction::Forward)]).unwrap();
        assert_eq!(agg.customer, inst.customers[2]);
    }

    #[test]
    fn aggregate_matches_path_walk() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(9);
        let inst = random_instance(&mut rng, 5);
        let path = [
            Visit::new(3, Direction::Forward),
            Visit::new(0, Direction::Backward),
            Visit::new(4, Direction::Forward),
        ];
        let agg = aggregate_subpath(&inst, &path).unwrap_or_else(|_| {
            let mut free = inst.clone();
            free.customers.iter_mut().for_each(|c| c.fixed_to = None);
            aggregate_subpath(&free, &path).unwrap()
        });
        let walk = |m: usize, p: &[Visit]| {
            let v = Vehicle::from_index(m);
            let c = &inst.costs[m];
            let mut t = 0.0;
            for (k, x) in p.iter().enumerate() {
                let cu = &inst.customers[x.customer];
                t += cu.traversal(v, x.direction);
                if k + 1 < p.len() {
                    let nx = &inst.customers[p[k + 1].customer];
                    t += c.get(cu.exit(x.direction), nx.entry(p[k + 1].direction));
                }
            }
            t
        };
        let reversed: Vec<Visit> = path.iter().rev().map(|v| Visit::new(v.customer, v.direction.flipped())).collect();
        for m in 0..2 {
            assert_eq!(agg.customer.internal[m][0], walk(m, &path));
            assert_eq!(agg.customer.internal[m][1], walk(m, &reversed));
        }
    }

    #[test]
    fn windows_cover_route_two() {
        let params = SlidingParams { s: 3, l: 1 };
        let pairs = window_pairs(10, 22, params);
        for pos in 10..22 {
            assert!(pairs.iter().any(|&(_, b)| (b..b + 3).contains(&pos)), "position {pos}");
        }
        assert!(pairs.iter().all(|&(a, b)| a < 10 && a + 3 <= b && b + 3 > 10 && b + 3 <= 22));
    }

    #[test]
    fn never_worse_and_feasible() {
        let g = generate_2tsp_instance(&GeneratorParams::new(14, 3), 6, Balance::Exact).unwrap();
        let mapped = map_2tsp_to_2vrp(&g.instance).unwrap();
        let inst = &mapped.instance;
        let mut rng = rand_pcg::Pcg64::seed_from_u64(2);
        let start = random_feasible_solution(inst, &mut rng).unwrap();
        for order in [SweepOrder::Restart, SweepOrder::Continue] {
            let opts = SearchOptions { order, audit: true };
            let (sol, stats) = sliding_subset_search_with(inst, &start, SlidingParams { s: 3, l: 1 }, &opts).unwrap();
            assert!(sol.cost <= start.cost);
            assert!(stats.audit_failures.is_empty(), "{:?}", stats.audit_failures);
            assert!(evaluate_2vrp(inst, &sol).feasible);
            assert!(sol.cost >= g.optimum - 1e-9);
        }
    }
}
