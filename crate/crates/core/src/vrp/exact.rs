//! Held-Karp style DP over subsets of customers.
//!
//! Element 0 is the auxiliary separator customer; element `k + 1` is
//! customer `k`. `V[i, J, d]` is the cheapest way to serve element `i` in
//! direction `d` and then every element of `J`, ending at vehicle 2's end
//! depot. While the separator is still in `J`, `i` rides on vehicle 1;
//! otherwise on vehicle 2.

use super::{Direction, TwoVrpInstance, TwoVrpSolution, Vehicle, Visit};
use crate::{Error, Result};

pub const DEFAULT_MAX_SUBSET_BITS: usize = 20;

/// Subset-width limit, overridable through `TWOROUTE_MAX_SUBSET_BITS`.
pub fn max_subset_bits() -> usize {
    std::env::var("TWOROUTE_MAX_SUBSET_BITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SUBSET_BITS)
}

pub fn solve_2vrp_exact(inst: &TwoVrpInstance) -> Result<TwoVrpSolution> {
    solve_2vrp_exact_with_limit(inst, max_subset_bits())
}

struct Layout {
    /// `arc[m][(a * 2 + da) * 2n + (b * 2 + db)]`: vehicle `m` cost from the
    /// exit of `a` to the entry of `b`.
    arc: [Vec<f64>; 2],
    /// Cost from the exit of `(a, da)` to the end depot, per vehicle.
    finish: [Vec<f64>; 2],
    /// Cost from vehicle 1's start depot to the entry of `(a, da)`.
    begin: Vec<f64>,
    /// Internal cost `[m][a * 2 + da]`.
    inner: [Vec<f64>; 2],
    demand: Vec<f64>,
    width: usize,
}

impl Layout {
    fn new(inst: &TwoVrpInstance) -> Self {
        let n = inst.n() + 1;
        let width = 2 * n;
        let inf = f64::INFINITY;
        let d = inst.depots;
        // Separator: enter at vehicle 1's end depot, leave at vehicle 2's start.
        let entry = |a: usize, da: usize| {
            if a == 0 {
                if da == 0 { Some(d.end[0]) } else { None }
            } else {
                Some(inst.customers[a - 1].entry(Direction::from_index(da)))
            }
        };
        let exit = |a: usize, da: usize| {
            if a == 0 {
                if da == 0 { Some(d.start[1]) } else { None }
            } else {
                Some(inst.customers[a - 1].exit(Direction::from_index(da)))
            }
        };
        let mut arc = [vec![inf; width * width], vec![inf; width * width]];
        let mut finish = [vec![inf; width], vec![inf; width]];
        let mut begin = vec![inf; width];
        let mut inner = [vec![inf; width], vec![inf; width]];
        for a in 0..n {
            for da in 0..2 {
                let s = a * 2 + da;
                if let Some(en) = entry(a, da) {
                    begin[s] = inst.costs[0].get(d.start[0], en);
                }
                for m in 0..2 {
                    inner[m][s] = if a == 0 {
                        if da == 0 { 0.0 } else { inf }
                    } else {
                        inst.customers[a - 1].internal[m][da]
                    };
                    if let Some(ex) = exit(a, da) {
                        finish[m][s] = inst.costs[m].get(ex, d.end[m]);
                        for b in 0..n {
                            for db in 0..2 {
                                if let Some(en) = entry(b, db) {
                                    arc[m][s * width + b * 2 + db] = inst.costs[m].get(ex, en);
                                }
                            }
                        }
                    }
                }
            }
        }
        let demand = std::iter::once(0.0).chain(inst.customers.iter().map(|c| c.demand)).collect();
        Layout { arc, finish, begin, inner, demand, width }
    }
}

pub fn solve_2vrp_exact_with_limit(inst: &TwoVrpInstance, max_bits: usize) -> Result<TwoVrpSolution> {
    inst.validate()?;
    let n = inst.n() + 1;
    if n > max_bits || n >= usize::BITS as usize {
        return Err(Error::SizeGuard(format!(
            "{} customers need {n} subset bits; limit is {max_bits}",
            inst.n()
        )));
    }
    let lay = Layout::new(inst);
    let full: usize = (1 << n) - 1;
    let inf = f64::INFINITY;

    let mut wsum = vec![0.0; 1 << n];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        wsum[mask] = wsum[mask & (mask - 1)] + lay.demand[low];
    }
    let total = wsum[full];
    let (cap1, cap2) = (inst.capacity[0], inst.capacity[1]);
    let mut fixed1 = 0usize;
    let mut fixed2 = 0usize;
    for (k, c) in inst.customers.iter().enumerate() {
        match c.fixed_to {
            Some(Vehicle::First) => fixed1 |= 1 << (k + 1),
            Some(Vehicle::Second) => fixed2 |= 1 << (k + 1),
            None => {}
        }
    }

    // table[(mask * n + i) * 2 + d]
    let mut table = vec![inf; (1usize << n) * n * 2];
    let at = |mask: usize, i: usize, d: usize| (mask * n + i) * 2 + d;

    for mask in 0..=full {
        let has_sep = mask & 1 == 1;
        let w = wsum[mask];
        if has_sep {
            // Everything outside `mask` is already on vehicle 1.
            if total - w > cap1 {
                continue;
            }
        } else if w > cap2 || mask & fixed1 != 0 {
            continue;
        }
        let m = if has_sep { 0 } else { 1 };
        let arcs = &lay.arc[m];
        for i in 0..n {
            let bit = 1 << i;
            if mask & bit != 0 {
                continue;
            }
            if i == 0 {
                if total - w > cap1 {
                    continue;
                }
            } else if has_sep {
                if fixed2 & bit != 0 || fixed2 & !mask & !bit != 0 {
                    continue;
                }
            } else if fixed1 & bit != 0 || w + lay.demand[i] > cap2 {
                continue;
            }
            for d in 0..2 {
                let s = i * 2 + d;
                let own = lay.inner[m][s];
                if own == inf {
                    continue;
                }
                let best = if mask == 0 {
                    lay.finish[1][s]
                } else {
                    let row = &arcs[s * lay.width..(s + 1) * lay.width];
                    let mut best = inf;
                    let mut rest = mask;
                    while rest != 0 {
                        let j = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        let sub = mask & !(1 << j);
                        let base = (sub * n + j) * 2;
                        let a = row[j * 2] + table[base];
                        if a < best {
                            best = a;
                        }
                        if j != 0 {
                            let b = row[j * 2 + 1] + table[base + 1];
                            if b < best {
                                best = b;
                            }
                        }
                    }
                    best
                };
                table[at(mask, i, d)] = own + best;
            }
        }
    }

    // Choose the first element of vehicle 1.
    let mut start: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        if i == 0 && !inst.allow_empty_first && inst.n() > 0 {
            continue;
        }
        for d in 0..2 {
            let v = lay.begin[i * 2 + d] + table[at(full & !(1 << i), i, d)];
            if start.is_none_or(|(_, _, b)| v < b) {
                start = Some((i, d, v));
            }
        }
    }
    let Some((mut i, mut d, best)) = start.filter(|s| s.2.is_finite()) else {
        return Err(Error::Infeasible("no feasible pair of routes".into()));
    };

    let mut sequence = vec![(i, d)];
    let mut mask = full & !(1 << i);
    while mask != 0 {
        let m = if mask & 1 == 1 { 0 } else { 1 };
        let s = i * 2 + d;
        let target = table[at(mask, i, d)];
        let own = lay.inner[m][s];
        let row = &lay.arc[m][s * lay.width..(s + 1) * lay.width];
        let mut next = None;
        'search: for j in (0..n).filter(|&j| mask >> j & 1 == 1) {
            let sub = mask & !(1 << j);
            for dj in 0..2 {
                if j == 0 && dj == 1 {
                    continue;
                }
                if own + (row[j * 2 + dj] + table[at(sub, j, dj)]) == target {
                    next = Some((j, dj));
                    break 'search;
                }
            }
        }
        let (j, dj) = next.expect("optimal successor exists");
        sequence.push((j, dj));
        mask &= !(1 << j);
        i = j;
        d = dj;
    }

    let mut routes: [Vec<Visit>; 2] = Default::default();
    let mut vehicle = 0;
    for (e, dir) in sequence {
        if e == 0 {
            vehicle = 1;
        } else {
            routes[vehicle].push(Visit::new(e - 1, Direction::from_index(dir)));
        }
    }
    let [r1, r2] = routes;
    let sol = inst.solution_from_routes(r1, r2);
    debug_assert!((sol.cost - best).abs() <= 1e-9 * best.abs().max(1.0), "{} vs {best}", sol.cost);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::AsymmetricCostMatrix;
    use crate::vrp::testutil::random_instance;
    use crate::vrp::{evaluate_2vrp, oracle_2vrp, Customer, Depots};
    use rand::SeedableRng;
    use std::sync::Arc;

    #[test]
    fn forced_partition() {
        let costs = AsymmetricCostMatrix::from_fn(6, |i, j| ((3 * i + 5 * j) % 7 + 1) as f64).unwrap();
        let mk = |l, r, w| Customer { left: l, right: r, internal: [[1.0, 2.0], [3.0, 1.0]], demand: w, fixed_to: None };
        let inst = TwoVrpInstance::new(
            vec![mk(2, 3, 3.0), mk(4, 5, 2.0)],
            Depots { start: [0, 1], end: [1, 0] },
            [3.0, 2.0],
            Arc::new([costs.clone(), costs.scaled(2.0).unwrap()]),
        )
        .unwrap();
        let sol = solve_2vrp_exact(&inst).unwrap();
        assert_eq!(sol.routes[0].iter().map(|v| v.customer).collect::<Vec<_>>(), vec![0]);
        assert_eq!(sol.routes[1].iter().map(|v| v.customer).collect::<Vec<_>>(), vec![1]);
        let leg = |m: usize, k: usize| {
            let v = Vehicle::from_index(m);
            [Direction::Forward, Direction::Backward]
                .into_iter()
                .map(|d| inst.route_cost(v, &[Visit::new(k, d)]))
                .fold(f64::INFINITY, f64::min)
        };
        assert_eq!(sol.cost, leg(0, 0) + leg(1, 1));
    }

    #[test]
    fn infinite_reverse_forces_left_entry() {
        let costs = AsymmetricCostMatrix::from_fn(3, |i, j| if j == 2 { 1.0 } else { 9.0 + i as f64 }).unwrap();
        let c = Customer { left: 1, right: 2, internal: [[0.0, f64::INFINITY]; 2], demand: 1.0, fixed_to: None };
        let inst = TwoVrpInstance::new(
            vec![c],
            Depots::shared(0),
            [1.0, 1.0],
            Arc::new([costs.clone(), costs]),
        )
        .unwrap();
        let sol = solve_2vrp_exact(&inst).unwrap();
        assert_eq!(sol.routes[0], vec![Visit::new(0, Direction::Forward)]);
    }

    #[test]
    fn matches_oracle_on_random_instances() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(5);
        for n in 3..=6 {
            for _ in 0..5 {
                let inst = random_instance(&mut rng, n);
                let a = solve_2vrp_exact(&inst).map(|s| s.cost).ok();
                let b = oracle_2vrp(&inst).map(|s| s.cost).ok();
                assert_eq!(a, b);
                if let Ok(sol) = solve_2vrp_exact(&inst) {
                    assert!(evaluate_2vrp(&inst, &sol).feasible);
                }
            }
        }
    }

    #[test]
    fn guard() {
        let costs = AsymmetricCostMatrix::from_fn(2, |_, _| 1.0).unwrap();
        let inst = TwoVrpInstance::new(
            (0..5).map(|_| Customer::point(1, 0.0)).collect(),
            Depots::shared(0),
            [9.0, 9.0],
            Arc::new([costs.clone(), costs]),
        )
        .unwrap();
        assert!(matches!(solve_2vrp_exact_with_limit(&inst, 5), Err(Error::SizeGuard(_))));
        assert!(solve_2vrp_exact_with_limit(&inst, 6).is_ok());
    }
}
