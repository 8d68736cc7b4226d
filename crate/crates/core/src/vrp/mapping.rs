use std::sync::Arc;

use super::{Customer, Depots, TwoVrpInstance, TwoVrpSolution, Vehicle};
use crate::two_tsp::{Balance, TwoTourSolution, TwoTspInstance};
use crate::{Error, Result};

/// A 2TSP rewritten as a 2VRP, with the node behind each customer.
#[derive(Debug, Clone)]
pub struct MappedTwoTsp {
    pub instance: TwoVrpInstance,
    /// `node_of[k]` is the 2TSP node served by customer `k`.
    pub node_of: Vec<usize>,
}

/// Node 0 becomes the shared depot. Every other fixed node turns into two
/// unit-demand customers, one pinned to each vehicle; free nodes become one
/// unpinned customer. Both capacities equal the tour size minus one.
pub fn map_2tsp_to_2vrp(inst: &TwoTspInstance) -> Result<MappedTwoTsp> {
    if inst.balance() != Balance::Exact {
        return Err(Error::InvalidInstance("only exactly balanced instances map to a 2VRP".into()));
    }
    let (p, _) = inst.tour_sizes();
    let mut customers = Vec::new();
    let mut node_of = Vec::new();
    for v in 1..inst.n() {
        if inst.is_fixed(v) {
            for vehicle in [Vehicle::First, Vehicle::Second] {
                customers.push(Customer { fixed_to: Some(vehicle), ..Customer::point(v, 1.0) });
                node_of.push(v);
            }
        } else {
            customers.push(Customer::point(v, 1.0));
            node_of.push(v);
        }
    }
    let c = inst.matrix().to_asymmetric();
    let cap = (p - 1) as f64;
    let instance = TwoVrpInstance::new(customers, Depots::shared(0), [cap, cap], Arc::new([c.clone(), c]))?;
    Ok(MappedTwoTsp { instance, node_of })
}

/// Reads the two routes back as tours starting at node 0.
pub fn vrp_solution_to_2tsp(mapped: &MappedTwoTsp, tsp: &TwoTspInstance, sol: &TwoVrpSolution) -> TwoTourSolution {
    let tour = |m: usize| -> Vec<usize> {
        std::iter::once(0).chain(sol.routes[m].iter().map(|v| mapped.node_of[v.customer])).collect()
    };
    TwoTourSolution::from_tours(tsp.matrix(), tour(0), tour(1))
}
