//! Two-vehicle routing with interval customers.
//!
//! A customer occupies two nodes of the cost matrices, `left` and `right`,
//! and is traversed in one of two directions at a per-vehicle internal cost
//! (`f64::INFINITY` forbids that direction). Vehicle `m` leaves
//! `depots.start[m]`, serves its route and finishes at `depots.end[m]`.
//!
//! The exact solver treats both routes as one sequence separated by an
//! auxiliary customer that links the end depot of vehicle 1 to the start
//! depot of vehicle 2.

mod exact;
pub mod io;
mod mapping;
mod oracle;

pub use exact::{max_subset_bits, solve_2vrp_exact, solve_2vrp_exact_with_limit, DEFAULT_MAX_SUBSET_BITS};
pub use mapping::{map_2tsp_to_2vrp, vrp_solution_to_2tsp, MappedTwoTsp};
pub use oracle::{oracle_2vrp, ORACLE_MAX_CUSTOMERS};

use std::fmt;
use std::sync::Arc;

use crate::matrices::AsymmetricCostMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vehicle {
    First,
    Second,
}

impl Vehicle {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Vehicle::First => 0,
            Vehicle::Second => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Vehicle::First
        } else {
            Vehicle::Second
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Enter at `left`, leave at `right`.
    Forward,
    /// Enter at `right`, leave at `left`.
    Backward,
}

impl Direction {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Direction::Forward => 0,
            Direction::Backward => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Direction::Forward
        } else {
            Direction::Backward
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Customer {
    pub left: usize,
    pub right: usize,
    /// Internal cost `[vehicle][direction]`.
    pub internal: [[f64; 2]; 2],
    pub demand: f64,
    pub fixed_to: Option<Vehicle>,
}

impl Customer {
    /// A point customer: both ends on one node, free traversal.
    pub fn point(node: usize, demand: f64) -> Self {
        Customer { left: node, right: node, internal: [[0.0; 2]; 2], demand, fixed_to: None }
    }

    #[inline]
    pub fn entry(&self, dir: Direction) -> usize {
        match dir {
            Direction::Forward => self.left,
            Direction::Backward => self.right,
        }
    }

    #[inline]
    pub fn exit(&self, dir: Direction) -> usize {
        match dir {
            Direction::Forward => self.right,
            Direction::Backward => self.left,
        }
    }

    #[inline]
    pub fn traversal(&self, vehicle: Vehicle, dir: Direction) -> f64 {
        self.internal[vehicle.index()][dir.index()]
    }

    pub fn allows(&self, vehicle: Vehicle) -> bool {
        self.fixed_to.is_none_or(|v| v == vehicle)
    }
}

/// Start and end depot of each vehicle, as matrix node labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Depots {
    pub start: [usize; 2],
    pub end: [usize; 2],
}

impl Depots {
    pub fn shared(node: usize) -> Self {
        Depots { start: [node; 2], end: [node; 2] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoVrpInstance {
    pub customers: Vec<Customer>,
    pub depots: Depots,
    pub capacity: [f64; 2],
    pub costs: Arc<[AsymmetricCostMatrix; 2]>,
    /// Lets vehicle 1 stay at its depots. Off by default.
    pub allow_empty_first: bool,
}

impl TwoVrpInstance {
    pub fn new(
        customers: Vec<Customer>,
        depots: Depots,
        capacity: [f64; 2],
        costs: Arc<[AsymmetricCostMatrix; 2]>,
    ) -> Result<Self> {
        let inst = TwoVrpInstance { customers, depots, capacity, costs, allow_empty_first: false };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let nodes = self.costs[0].n();
        if self.costs[1].n() != nodes {
            return Err(Error::InvalidInstance("cost matrices differ in order".into()));
        }
        let depot_ok = self.depots.start.iter().chain(&self.depots.end).all(|&d| d < nodes);
        if !depot_ok {
            return Err(Error::InvalidInstance("depot node out of range".into()));
        }
        if self.capacity.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidInstance("capacities must be nonnegative".into()));
        }
        let mut fixed_load = [0.0; 2];
        for (k, c) in self.customers.iter().enumerate() {
            if c.left >= nodes || c.right >= nodes {
                return Err(Error::InvalidInstance(format!("customer {} refers to unknown node", k + 1)));
            }
            if !(c.demand >= 0.0) || !c.demand.is_finite() {
                return Err(Error::InvalidInstance(format!("customer {} has invalid demand", k + 1)));
            }
            if c.internal.iter().flatten().any(|v| !(*v >= 0.0)) {
                return Err(Error::InvalidInstance(format!(
                    "customer {} has a negative or NaN internal cost",
                    k + 1
                )));
            }
            if let Some(v) = c.fixed_to {
                fixed_load[v.index()] += c.demand;
            }
        }
        for m in 0..2 {
            if fixed_load[m] > self.capacity[m] {
                return Err(Error::Infeasible(format!(
                    "customers fixed to vehicle {} exceed its capacity",
                    m + 1
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.customers.len()
    }

    pub fn total_demand(&self) -> f64 {
        self.customers.iter().map(|c| c.demand).sum()
    }

    /// Cost of one vehicle's route, summed from its start depot forward.
    pub fn route_cost(&self, vehicle: Vehicle, route: &[Visit]) -> f64 {
        let m = vehicle.index();
        let c = &self.costs[m];
        let mut at = self.depots.start[m];
        let mut total = 0.0;
        for v in route {
            let cust = &self.customers[v.customer];
            total += c.get(at, cust.entry(v.direction));
            total += cust.traversal(vehicle, v.direction);
            at = cust.exit(v.direction);
        }
        total + c.get(at, self.depots.end[m])
    }

    pub fn solution_from_routes(&self, route1: Vec<Visit>, route2: Vec<Visit>) -> TwoVrpSolution {
        let cost = self.route_cost(Vehicle::First, &route1) + self.route_cost(Vehicle::Second, &route2);
        let load = |r: &[Visit]| r.iter().map(|v| self.customers[v.customer].demand).sum();
        let loads = [load(&route1), load(&route2)];
        TwoVrpSolution { routes: [route1, route2], cost, loads }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Visit {
    pub customer: usize,
    pub direction: Direction,
}

impl Visit {
    pub fn new(customer: usize, direction: Direction) -> Self {
        Visit { customer, direction }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoVrpSolution {
    pub routes: [Vec<Visit>; 2],
    pub cost: f64,
    pub loads: [f64; 2],
}

impl TwoVrpSolution {
    pub fn route(&self, vehicle: Vehicle) -> &[Visit] {
        &self.routes[vehicle.index()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RouteViolation {
    Capacity { vehicle: Vehicle, load: f64 },
    Coverage { customer: usize, visits: usize },
    UnknownCustomer { customer: usize },
    FixedTo { customer: usize },
    EmptyFirst,
    InfiniteCost,
}

impl fmt::Display for RouteViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RouteViolation::Capacity { vehicle, load } => {
                write!(f, "capacity-{}: load {load}", vehicle.index() + 1)
            }
            RouteViolation::Coverage { customer, visits } => {
                write!(f, "coverage: customer {} visited {visits} times", customer + 1)
            }
            RouteViolation::UnknownCustomer { customer } => {
                write!(f, "unknown customer {}", customer + 1)
            }
            RouteViolation::FixedTo { customer } => {
                write!(f, "fixed-to: customer {} on the wrong vehicle", customer + 1)
            }
            RouteViolation::EmptyFirst => write!(f, "empty-vehicle-1"),
            RouteViolation::InfiniteCost => write!(f, "infinite-cost"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VrpEvaluation {
    pub feasible: bool,
    pub cost: f64,
    pub violations: Vec<RouteViolation>,
}

pub fn evaluate_2vrp(inst: &TwoVrpInstance, sol: &TwoVrpSolution) -> VrpEvaluation {
    let n = inst.n();
    let mut violations = Vec::new();
    let mut visits = vec![0usize; n];
    let mut known: [Vec<Visit>; 2] = Default::default();
    for m in 0..2 {
        let vehicle = Vehicle::from_index(m);
        let mut load = 0.0;
        for v in &sol.routes[m] {
            if v.customer >= n {
                violations.push(RouteViolation::UnknownCustomer { customer: v.customer });
                continue;
            }
            let c = &inst.customers[v.customer];
            visits[v.customer] += 1;
            load += c.demand;
            if !c.allows(vehicle) {
                violations.push(RouteViolation::FixedTo { customer: v.customer });
            }
            known[m].push(*v);
        }
        if load > inst.capacity[m] {
            violations.push(RouteViolation::Capacity { vehicle, load });
        }
    }
    for (k, &count) in visits.iter().enumerate() {
        if count != 1 {
            violations.push(RouteViolation::Coverage { customer: k, visits: count });
        }
    }
    if sol.routes[0].is_empty() && !inst.allow_empty_first && n > 0 {
        violations.push(RouteViolation::EmptyFirst);
    }
    let cost = inst.route_cost(Vehicle::First, &known[0]) + inst.route_cost(Vehicle::Second, &known[1]);
    if !cost.is_finite() {
        violations.push(RouteViolation::InfiniteCost);
    }
    VrpEvaluation { feasible: violations.is_empty(), cost, violations }
}

/// Random instance over `2n + 4` nodes with integer costs (so cost sums
/// are exact), occasional forbidden directions and fixed customers. Nodes
/// 1-4 are the depots; customer `k` spans nodes `5 + 2k` and `6 + 2k`.
pub fn random_2vrp_instance<R: rand::Rng>(rng: &mut R, n: usize) -> TwoVrpInstance {
    let nodes = 2 * n + 4;
    let mk = |rng: &mut R| {
        AsymmetricCostMatrix::from_fn(nodes, |_, _| rng.gen_range(1..30) as f64).unwrap()
    };
    let costs = Arc::new([mk(rng), mk(rng)]);
    let customers: Vec<Customer> = (0..n)
        .map(|k| {
            let mut internal = [[0.0; 2]; 2];
            for row in internal.iter_mut() {
                for v in row.iter_mut() {
                    *v = if rng.gen_bool(0.15) { f64::INFINITY } else { rng.gen_range(0..10) as f64 };
                }
            }
            if internal[0].iter().chain(&internal[1]).all(|v| v.is_infinite()) {
                internal[0][0] = 1.0;
            }
            let fixed_to = match rng.gen_range(0..6) {
                0 => Some(Vehicle::First),
                1 => Some(Vehicle::Second),
                _ => None,
            };
            Customer {
                left: 4 + 2 * k,
                right: 5 + 2 * k,
                internal,
                demand: rng.gen_range(1..5) as f64,
                fixed_to,
            }
        })
        .collect();
    let total: f64 = customers.iter().map(|c| c.demand).sum();
    let cap = (total * rng.gen_range(0.55..0.9)).ceil();
    let mut inst = TwoVrpInstance {
        customers,
        depots: Depots { start: [0, 2], end: [1, 3] },
        capacity: [cap, (total - cap + rng.gen_range(0.0..4.0)).max(cap * 0.6).ceil()],
        costs,
        allow_empty_first: false,
    };
    // Keep fixed loads within capacity.
    for m in 0..2 {
        while inst
            .customers
            .iter()
            .filter(|c| c.fixed_to == Some(Vehicle::from_index(m)))
            .map(|c| c.demand)
            .sum::<f64>()
            > inst.capacity[m]
        {
            let k = inst.customers.iter().position(|c| c.fixed_to == Some(Vehicle::from_index(m))).unwrap();
            inst.customers[k].fixed_to = None;
        }
    }
    inst
}
