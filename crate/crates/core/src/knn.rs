//! Kalmanson Nearest Neighbour ordering and the KS heuristic for the
//! balanced 2TSP on arbitrary symmetric matrices.
//!
//! KNN grows a path over nodes `1..n` using the zero-transformed matrix
//! (row and column 0 cleared), always attaching the unvisited node closest
//! to either end, then inserts node 0 where it is cheapest in the original
//! matrix. For a permuted strong Kalmanson matrix the resulting cyclic order
//! restores the Kalmanson property.

use rayon::prelude::*;

use crate::matrices::{zero_transform, Costs, Permutation, Relabeled, SymmetricCostMatrix};
use crate::pyramidal::belperm;
use crate::two_tsp::{evaluate_solution, solve_balanced_2tsp, TwoTourSolution, TwoTspInstance};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KnnResult {
    /// Cyclic order of all nodes, rotated to start at node 0.
    pub tour: Permutation,
    pub used_start: usize,
}

pub fn knn(c: &SymmetricCostMatrix, start: usize) -> Result<KnnResult> {
    let n = c.n();
    if n < 3 {
        return Err(Error::InvalidParams(format!("KNN needs n >= 3, got {n}")));
    }
    if start == 0 || start >= n {
        return Err(Error::InvalidParams(format!("start node {} must be in 2..={n}", start + 1)));
    }
    let z = zero_transform(c);
    let mut visited = vec![false; n];
    visited[0] = true;
    visited[start] = true;
    let mut path = std::collections::VecDeque::with_capacity(n);
    path.push_back(start);
    for _ in 2..n {
        let first = *path.front().unwrap();
        let last = *path.back().unwrap();
        let mut pick: Option<(f64, usize, bool)> = None;
        for v in (1..n).filter(|&v| !visited[v]) {
            let (df, dl) = (z.get(first, v), z.get(last, v));
            let (d, at_last) = if dl <= df { (dl, true) } else { (df, false) };
            if pick.is_none_or(|(best, _, _)| d < best) {
                pick = Some((d, v, at_last));
            }
        }
        let (_, v, at_last) = pick.expect("unvisited node remains");
        visited[v] = true;
        if at_last {
            path.push_back(v);
        } else {
            path.push_front(v);
        }
    }
    let path: Vec<usize> = path.into();
    let m = path.len();
    let mut best = (f64::INFINITY, 0);
    for k in 0..m {
        let (a, b) = (path[k], path[(k + 1) % m]);
        let delta = c.get(a, 0) + c.get(0, b) - c.get(a, b);
        if delta < best.0 {
            best = (delta, k);
        }
    }
    let mut order = Vec::with_capacity(n);
    order.push(0);
    order.extend_from_slice(&path[best.1 + 1..]);
    order.extend_from_slice(&path[..=best.1]);
    Ok(KnnResult { tour: Permutation::new(order)?, used_start: start })
}

/// Runs [`knn`] from every start, solves the relabeled instance exactly,
/// polishes each tour with BELPERM and keeps the shortest pair.
pub fn ks_heuristic(inst: &TwoTspInstance) -> Result<TwoTourSolution> {
    let n = inst.n();
    if n < 3 {
        return solve_balanced_2tsp(inst);
    }
    let candidates: Vec<Result<TwoTourSolution>> =
        (1..n).into_par_iter().map(|start| ks_from_start(inst, start)).collect();
    let mut best: Option<TwoTourSolution> = None;
    for cand in candidates {
        let cand = cand?;
        if best.as_ref().is_none_or(|b| cand.total < b.total) {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one start"))
}

/// One KS iteration from a fixed KNN start node.
pub fn ks_from_start(inst: &TwoTspInstance, start: usize) -> Result<TwoTourSolution> {
    let order = knn(inst.matrix(), start)?.tour;
    let relabeled = inst.relabel(&order)?;
    let sol = solve_balanced_2tsp(&relabeled)?.map_nodes(&order);
    let c = inst.matrix();
    let polished = TwoTourSolution::from_tours(c, polish(c, &sol.tour1), polish(c, &sol.tour2));
    if polished.total <= sol.total && evaluate_solution(inst, &polished).feasible {
        Ok(polished)
    } else {
        Ok(TwoTourSolution::from_tours(c, sol.tour1, sol.tour2))
    }
}

/// BELPERM on the nodes of one tour, keeping its first node in front.
pub fn polish<C: Costs + ?Sized>(c: &C, tour: &[usize]) -> Vec<usize> {
    if tour.len() < 4 {
        return tour.to_vec();
    }
    let view = Relabeled { inner: c, map: tour };
    let local = belperm(&view, &Permutation::identity(tour.len()));
    local.nodes.iter().map(|&v| tour[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c_phi() -> SymmetricCostMatrix {
        SymmetricCostMatrix::from_rows(&[
            vec![0., 0., 0., 3., 1.],
            vec![0., 0., 4., 5., 4.],
            vec![0., 4., 0., 5., 2.],
            vec![3., 5., 5., 0., 2.],
            vec![1., 4., 2., 2., 0.],
        ])
        .unwrap()
    }

    fn diamond() -> SymmetricCostMatrix {
        SymmetricCostMatrix::from_rows(&[
            vec![0., 22., 40., 22.],
            vec![22., 0., 22., 20.],
            vec![40., 22., 0., 22.],
            vec![22., 20., 22., 0.],
        ])
        .unwrap()
    }

    #[test]
    fn worked_example_order() {
        let r = knn(&c_phi(), 1).unwrap();
        assert_eq!(r.tour.as_slice(), &[0, 1, 3, 4, 2]);
    }

    #[test]
    fn diamond_order() {
        let r = knn(&diamond(), 2).unwrap();
        assert_eq!(r.tour.labels(), vec![1, 4, 3, 2]);
    }

    #[test]
    fn rejects_bad_start() {
        assert!(knn(&diamond(), 0).is_err());
        assert!(knn(&diamond(), 4).is_err());
    }

    #[test]
    fn three_nodes() {
        let c = SymmetricCostMatrix::from_rows(&[
            vec![0., 2., 5.],
            vec![2., 0., 4.],
            vec![5., 4., 0.],
        ])
        .unwrap();
        let inst = TwoTspInstance::new(c, &[0]).unwrap();
        assert_eq!(ks_heuristic(&inst).unwrap().total, 14.0);
    }
}
