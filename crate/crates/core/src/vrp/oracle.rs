use super::{Direction, TwoVrpInstance, TwoVrpSolution, Vehicle, Visit};
use crate::{Error, Result};

pub const ORACLE_MAX_CUSTOMERS: usize = 9;

/// Exhaustive search over vehicle assignments, visiting orders and
/// directions. Partial routes already costlier than the incumbent are cut,
/// which is exact because every cost is nonnegative.
pub fn oracle_2vrp(inst: &TwoVrpInstance) -> Result<TwoVrpSolution> {
    inst.validate()?;
    if inst.n() > ORACLE_MAX_CUSTOMERS {
        return Err(Error::SizeGuard(format!(
            "oracle limited to {ORACLE_MAX_CUSTOMERS} customers, got {}",
            inst.n()
        )));
    }
    let mut search = Search {
        inst,
        used: vec![false; inst.n()],
        routes: [Vec::new(), Vec::new()],
        best: None,
    };
    let start = inst.depots.start[0];
    search.extend(0, start, 0.0, 0.0, 0);
    let (_, [r1, r2]) = search.best.ok_or_else(|| Error::Infeasible("no feasible pair of routes".into()))?;
    Ok(inst.solution_from_routes(r1, r2))
}

struct Search<'a> {
    inst: &'a TwoVrpInstance,
    used: Vec<bool>,
    routes: [Vec<Visit>; 2],
    best: Option<(f64, [Vec<Visit>; 2])>,
}

impl Search<'_> {
    fn bound(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    fn extend(&mut self, m: usize, at: usize, cost: f64, load: f64, placed: usize) {
        let inst = self.inst;
        let vehicle = Vehicle::from_index(m);
        let c = &inst.costs[m];
        // Close the current route.
        let closed = cost + c.get(at, inst.depots.end[m]);
        if m == 0 {
            let may_close = !self.routes[0].is_empty() || inst.allow_empty_first || inst.n() == 0;
            if may_close && closed < self.bound() {
                self.extend(1, inst.depots.start[1], closed, 0.0, placed);
            }
        } else if placed == inst.n() && closed < self.bound() {
            self.best = Some((closed, self.routes.clone()));
        }
        for k in 0..inst.n() {
            if self.used[k] {
                continue;
            }
            let cust = &inst.customers[k];
            if !cust.allows(vehicle) || load + cust.demand > inst.capacity[m] {
                continue;
            }
            for dir in [Direction::Forward, Direction::Backward] {
                let next = cost + c.get(at, cust.entry(dir)) + cust.traversal(vehicle, dir);
                if !(next < self.bound()) {
                    continue;
                }
                self.used[k] = true;
                self.routes[m].push(Visit::new(k, dir));
                self.extend(m, cust.exit(dir), next, load + cust.demand, placed + 1);
                self.routes[m].pop();
                self.used[k] = false;
            }
        }
    }
}
