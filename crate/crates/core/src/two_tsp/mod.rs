//! The balanced two-period TSP.
//!
//! Fixed nodes (always including node 0, the home base) are visited in both
//! periods; every other node in exactly one. Both tours carry the same
//! number of nodes, counting node 0 once per tour.
//!
//! [`solve_balanced_2tsp`] searches all solutions that can be written as one
//! sequence `<0, increasing part, 0, decreasing part, 0>`. When the matrix is
//! Kalmanson in its given numbering that family contains an optimal solution.

mod lowmem;
mod oracle;

pub use lowmem::{solve_balanced_2tsp_lowmem, solve_balanced_2tsp_lowmem_tours};
pub use oracle::{brute_force_tsp, oracle_2tsp, ORACLE_MAX_SIZE};

use std::fmt;

use crate::matrices::{Costs, Permutation, SymmetricCostMatrix};
use crate::{Error, Result};

/// How strictly the two tour sizes must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Balance {
    /// `n + |S|` must be even and both tours hold `(n + |S|) / 2` nodes.
    #[default]
    Exact,
    /// Odd totals are allowed; tour sizes are the floor and ceiling of
    /// `(n + |S|) / 2`.
    Near,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoTspInstance {
    matrix: SymmetricCostMatrix,
    fixed: Vec<bool>,
    balance: Balance,
}

impl TwoTspInstance {
    pub fn new(matrix: SymmetricCostMatrix, fixed: &[usize]) -> Result<Self> {
        Self::with_balance(matrix, fixed, Balance::Exact)
    }

    pub fn with_balance(matrix: SymmetricCostMatrix, fixed: &[usize], balance: Balance) -> Result<Self> {
        let n = matrix.n();
        if n < 2 {
            return Err(Error::InvalidInstance("need at least two nodes".into()));
        }
        let mut flags = vec![false; n];
        for &v in fixed {
            if v >= n {
                return Err(Error::InvalidInstance(format!("fixed node {} out of range", v + 1)));
            }
            if flags[v] {
                return Err(Error::InvalidInstance(format!("fixed node {} repeated", v + 1)));
            }
            flags[v] = true;
        }
        if !flags[0] {
            return Err(Error::InvalidInstance("node 1 must be a fixed node".into()));
        }
        let total = n + fixed.len();
        if total % 2 == 1 && balance == Balance::Exact {
            return Err(Error::InvalidInstance(format!(
                "n + |S| = {total} is odd; tours cannot be balanced exactly"
            )));
        }
        Ok(TwoTspInstance { matrix, fixed: flags, balance })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &SymmetricCostMatrix {
        &self.matrix
    }

    pub fn balance(&self) -> Balance {
        self.balance
    }

    #[inline]
    pub fn is_fixed(&self, v: usize) -> bool {
        self.fixed[v]
    }

    pub fn fixed_nodes(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.fixed[v]).collect()
    }

    pub fn fixed_count(&self) -> usize {
        self.fixed.iter().filter(|&&f| f).count()
    }

    /// Allowed tour sizes `(smaller, larger)`; equal in exact mode.
    pub fn tour_sizes(&self) -> (usize, usize) {
        let total = self.n() + self.fixed_count();
        (total / 2, total.div_ceil(2))
    }

    /// Same instance seen through a renumbering: new node `i` is old node
    /// `sigma(i)`. `sigma(0)` must be fixed.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Self> {
        let matrix = self.matrix.permute(sigma)?;
        let fixed: Vec<usize> = (0..self.n()).filter(|&i| self.fixed[sigma.get(i)]).collect();
        Self::with_balance(matrix, &fixed, self.balance)
    }

    /// The same instance with every cost multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Ok(TwoTspInstance { matrix: self.matrix.scaled(factor)?, ..self.clone() })
    }
}

/// Two closed tours, each starting at node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTourSolution {
    pub tour1: Vec<usize>,
    pub tour2: Vec<usize>,
    pub total: f64,
}

impl TwoTourSolution {
    /// Builds a solution and sums its length. Each tour is summed in a fixed
    /// orientation so a tour and its reversal give bit-identical totals.
    pub fn from_tours<C: Costs + ?Sized>(c: &C, tour1: Vec<usize>, tour2: Vec<usize>) -> Self {
        let total = oriented_length(c, &tour1) + oriented_length(c, &tour2);
        TwoTourSolution { tour1, tour2, total }
    }

    /// Translates node labels through `sigma` (new label = `sigma(old)`).
    pub fn map_nodes(&self, sigma: &Permutation) -> Self {
        let map = |t: &[usize]| t.iter().map(|&v| sigma.get(v)).collect();
        TwoTourSolution { tour1: map(&self.tour1), tour2: map(&self.tour2), total: self.total }
    }
}

pub(crate) fn oriented_length<C: Costs + ?Sized>(c: &C, tour: &[usize]) -> f64 {
    if tour.len() > 2 && tour[1] > tour[tour.len() - 1] {
        let mut t = tour.to_vec();
        t[1..].reverse();
        c.tour_length(&t)
    } else {
        c.tour_length(tour)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TourViolation {
    StartNode { tour: usize },
    UnknownNode { tour: usize, node: usize },
    Duplicate { tour: usize, node: usize },
    FixedAbsent { tour: usize, node: usize },
    Coverage { node: usize, visits: usize },
    Balance { sizes: (usize, usize) },
}

impl fmt::Display for TourViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TourViolation::StartNode { tour } => write!(f, "tour{tour}: does not start at node 1"),
            TourViolation::UnknownNode { tour, node } => {
                write!(f, "tour{tour}: unknown node {}", node + 1)
            }
            TourViolation::Duplicate { tour, node } => {
                write!(f, "tour{tour}: node {} repeated", node + 1)
            }
            TourViolation::FixedAbsent { tour, node } => {
                write!(f, "tour{tour}: fixed node absent ({})", node + 1)
            }
            TourViolation::Coverage { node, visits } => {
                write!(f, "coverage: free node {} visited {visits} times", node + 1)
            }
            TourViolation::Balance { sizes } => {
                write!(f, "balance: tour sizes {} and {}", sizes.0, sizes.1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub feasible: bool,
    pub total: f64,
    pub violations: Vec<TourViolation>,
}

/// Checks a pair of tours against the instance and recomputes its length.
pub fn evaluate_solution(inst: &TwoTspInstance, sol: &TwoTourSolution) -> Evaluation {
    let n = inst.n();
    let mut violations = Vec::new();
    let mut visits = vec![0usize; n];
    let mut total = 0.0;
    for (idx, tour) in [&sol.tour1, &sol.tour2].into_iter().enumerate() {
        let tid = idx + 1;
        if tour.first() != Some(&0) {
            violations.push(TourViolation::StartNode { tour: tid });
        }
        let mut seen = vec![false; n];
        for &v in tour.iter() {
            if v >= n {
                violations.push(TourViolation::UnknownNode { tour: tid, node: v });
                continue;
            }
            if seen[v] {
                violations.push(TourViolation::Duplicate { tour: tid, node: v });
            }
            seen[v] = true;
            visits[v] += 1;
        }
        for v in (0..n).filter(|&v| inst.is_fixed(v) && !seen[v]) {
            violations.push(TourViolation::FixedAbsent { tour: tid, node: v });
        }
        let known: Vec<usize> = tour.iter().copied().filter(|&v| v < n).collect();
        total += oriented_length(inst.matrix(), &known);
    }
    for v in (0..n).filter(|&v| !inst.is_fixed(v) && visits[v] != 1) {
        violations.push(TourViolation::Coverage { node: v, visits: visits[v] });
    }
    let (lo, hi) = inst.tour_sizes();
    let sizes = (sol.tour1.len(), sol.tour2.len());
    let ok = match inst.balance() {
        Balance::Exact => sizes.0 == lo && sizes.1 == lo,
        Balance::Near => sizes.0.min(sizes.1) == lo && sizes.0.max(sizes.1) == hi,
    };
    if !ok {
        violations.push(TourViolation::Balance { sizes });
    }
    Evaluation { feasible: violations.is_empty(), total, violations }
}

/// DP over `(x, y, m)`: cheapest completion from the open end `x` of the
/// first tour, around node 0, back to the open end `y` of the second tour,
/// when the second tour already holds `m` nodes (node 0 included) and every
/// node up to `max(x, y)` is placed.
struct CubicTable<'a> {
    inst: &'a TwoTspInstance,
    n: usize,
    hi: usize,
    v: Vec<f64>,
}

enum Step {
    First(f64),
    Second(f64),
    Both(f64),
}

impl<'a> CubicTable<'a> {
    fn build(inst: &'a TwoTspInstance) -> Self {
        let n = inst.n();
        let (lo, hi) = inst.tour_sizes();
        let c = inst.matrix();
        let mut t = CubicTable { inst, n, hi, v: vec![f64::INFINITY; n * n * (hi + 2)] };
        let top = n - 1;
        let mut boundary = |x: usize, y: usize| {
            for m in [lo, hi] {
                let idx = t.idx(x, y, m);
                t.v[idx] = c.get(x, 0) + c.get(0, y);
            }
        };
        for other in 0..top {
            boundary(other, top);
            boundary(top, other);
        }
        if inst.is_fixed(top) {
            boundary(top, top);
        }
        for k in (1..top).rev() {
            for other in 0..k {
                t.fill(other, k);
                t.fill(k, other);
            }
            if inst.is_fixed(k) {
                t.fill(k, k);
            }
        }
        t
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, m: usize) -> usize {
        (x * self.n + y) * (self.hi + 2) + m
    }

    #[inline]
    fn get(&self, x: usize, y: usize, m: usize) -> f64 {
        if m > self.hi {
            f64::INFINITY
        } else {
            self.v[self.idx(x, y, m)]
        }
    }

    fn options(&self, x: usize, y: usize, m: usize) -> Step {
        let c = self.inst.matrix();
        let q = x.max(y) + 1;
        if self.inst.is_fixed(q) {
            Step::Both(c.get(x, q) + c.get(q, y) + self.get(q, q, m + 1))
        } else {
            let first = c.get(x, q) + self.get(q, y, m);
            let second = c.get(q, y) + self.get(x, q, m + 1);
            if first <= second {
                Step::First(first)
            } else {
                Step::Second(second)
            }
        }
    }

    fn fill(&mut self, x: usize, y: usize) {
        for m in 1..=self.hi {
            let value = match self.options(x, y, m) {
                Step::First(v) | Step::Second(v) | Step::Both(v) => v,
            };
            let idx = self.idx(x, y, m);
            self.v[idx] = value;
        }
    }
}

/// Exact optimum over the sequence family; `O(n^3)` time and space.
pub fn solve_balanced_2tsp(inst: &TwoTspInstance) -> Result<TwoTourSolution> {
    let table = CubicTable::build(inst);
    let top = inst.n() - 1;
    let (mut x, mut y, mut m) = (0, 0, 1);
    let best = match table.options(0, 0, 1) {
        Step::First(v) | Step::Second(v) | Step::Both(v) => v,
    };
    if !best.is_finite() {
        return Err(Error::Infeasible("no balanced pair of tours exists".into()));
    }
    let mut first = vec![0];
    let mut second = Vec::new();
    loop {
        let q = x.max(y) + 1;
        match table.options(x, y, m) {
            Step::First(_) => {
                first.push(q);
                x = q;
            }
            Step::Second(_) => {
                second.push(q);
                y = q;
                m += 1;
            }
            Step::Both(_) => {
                first.push(q);
                second.push(q);
                x = q;
                y = q;
                m += 1;
            }
        }
        if q == top {
            break;
        }
    }
    let tour2: Vec<usize> = std::iter::once(0).chain(second.into_iter().rev()).collect();
    Ok(TwoTourSolution::from_tours(inst.matrix(), first, tour2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> SymmetricCostMatrix {
        SymmetricCostMatrix::from_fn(n, |i, j| ((i * 13 + j * 7) % 11 + 1) as f64).unwrap()
    }

    #[test]
    fn three_nodes_single_fixed() {
        let c = sample(3);
        let inst = TwoTspInstance::new(c.clone(), &[0]).unwrap();
        let sol = solve_balanced_2tsp(&inst).unwrap();
        assert_eq!(sol.total, 2.0 * c.get(0, 1) + 2.0 * c.get(0, 2));
        assert!(evaluate_solution(&inst, &sol).feasible);
    }

    #[test]
    fn all_fixed_doubles_master_tour() {
        let c = sample(4);
        let inst = TwoTspInstance::new(c.clone(), &[0, 1, 2, 3]).unwrap();
        let sol = solve_balanced_2tsp(&inst).unwrap();
        assert_eq!(sol.tour1, vec![0, 1, 2, 3]);
        assert_eq!(sol.tour2, vec![0, 3, 2, 1]);
        assert_eq!(sol.total, 2.0 * c.tour_length(&[0, 1, 2, 3]));
    }

    #[test]
    fn instance_validation() {
        assert!(TwoTspInstance::new(sample(4), &[1, 2]).is_err());
        assert!(TwoTspInstance::new(sample(4), &[0, 1, 2]).is_err());
        assert!(TwoTspInstance::with_balance(sample(4), &[0, 1, 2], Balance::Near).is_ok());
        assert!(TwoTspInstance::new(sample(4), &[0, 0]).is_err());
        assert!(TwoTspInstance::new(sample(4), &[0, 9]).is_err());
    }

    #[test]
    fn evaluation_reports_violations() {
        let inst = TwoTspInstance::new(sample(6), &[0, 2]).unwrap();
        let good = solve_balanced_2tsp(&inst).unwrap();
        assert!(evaluate_solution(&inst, &good).feasible);

        let mut missing = good.clone();
        missing.tour2.retain(|&v| v != 2);
        let e = evaluate_solution(&inst, &missing);
        assert!(!e.feasible);
        assert!(e.violations.iter().any(|v| v.to_string().contains("fixed node absent")));

        let mut unbalanced = good.clone();
        let moved = *unbalanced.tour2.iter().find(|&&v| v != 0 && v != 2).unwrap();
        unbalanced.tour2.retain(|&v| v != moved);
        unbalanced.tour1.push(moved);
        let e = evaluate_solution(&inst, &unbalanced);
        assert!(e.violations.iter().any(|v| v.to_string().contains("balance")));
    }

    #[test]
    fn near_balanced_sizes() {
        let inst = TwoTspInstance::with_balance(sample(6), &[0], Balance::Near).unwrap();
        assert_eq!(inst.tour_sizes(), (3, 4));
        let sol = solve_balanced_2tsp(&inst).unwrap();
        assert!(evaluate_solution(&inst, &sol).feasible);
        let oracle = oracle_2tsp(&inst).unwrap();
        assert!(sol.total >= oracle.total - 1e-9);
    }

    #[test]
    fn figure_one_sequence_is_feasible() {
        // 10 nodes, S = {1, 3, 5, 8}: <1,2,3,5,8,9,10 | 1,8,7,6,5,4,3>
        let inst = TwoTspInstance::new(sample(10), &[0, 2, 4, 7]).unwrap();
        let t1 = vec![0, 1, 2, 4, 7, 8, 9];
        let t2 = vec![0, 7, 6, 5, 4, 3, 2];
        let sol = TwoTourSolution::from_tours(inst.matrix(), t1, t2);
        assert!(evaluate_solution(&inst, &sol).feasible);
    }
}
