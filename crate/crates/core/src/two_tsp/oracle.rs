use super::{Balance, TwoTourSolution, TwoTspInstance};
use crate::matrices::Costs;
use crate::{Error, Result};

/// Largest `n + |S|` the oracle accepts.
pub const ORACLE_MAX_SIZE: usize = 18;

/// Shortest closed tour through `nodes`, starting at `nodes[0]`, by
/// exhaustive enumeration of the orders of the remaining nodes. Costs must be
/// nonnegative (partial orders longer than the incumbent are cut).
pub fn brute_force_tsp<C: Costs + ?Sized>(c: &C, nodes: &[usize]) -> (f64, Vec<usize>) {
    if nodes.len() <= 1 {
        return (0.0, nodes.to_vec());
    }
    let mut rest = nodes[1..].to_vec();
    let mut path = vec![nodes[0]];
    let mut best = (f64::INFINITY, Vec::new());
    extend(c, &mut path, &mut rest, 0.0, &mut best);
    best
}

fn extend<C: Costs + ?Sized>(
    c: &C,
    path: &mut Vec<usize>,
    rest: &mut Vec<usize>,
    so_far: f64,
    best: &mut (f64, Vec<usize>),
) {
    let last = *path.last().unwrap();
    if rest.is_empty() {
        let total = so_far + c.cost(last, path[0]);
        if total < best.0 {
            *best = (total, path.clone());
        }
        return;
    }
    for k in 0..rest.len() {
        let v = rest.swap_remove(k);
        let next = so_far + c.cost(last, v);
        if next < best.0 {
            path.push(v);
            extend(c, path, rest, next, best);
            path.pop();
        }
        rest.push(v);
        let len = rest.len();
        rest.swap(k, len - 1);
    }
}

/// Optimal balanced 2TSP solution by enumerating every split of the free
/// nodes and solving both tours exhaustively.
pub fn oracle_2tsp(inst: &TwoTspInstance) -> Result<TwoTourSolution> {
    let n = inst.n();
    let fixed = inst.fixed_nodes();
    if n + fixed.len() > ORACLE_MAX_SIZE {
        return Err(Error::SizeGuard(format!(
            "oracle limited to n + |S| <= {ORACLE_MAX_SIZE}, got {}",
            n + fixed.len()
        )));
    }
    let free: Vec<usize> = (0..n).filter(|&v| !inst.is_fixed(v)).collect();
    let (lo, hi) = inst.tour_sizes();
    let mut first_sizes = vec![lo];
    if inst.balance() == Balance::Near && hi != lo {
        first_sizes.push(hi);
    }
    let c = inst.matrix();
    let mut best: Option<TwoTourSolution> = None;
    for size in first_sizes {
        let Some(take) = size.checked_sub(fixed.len()) else { continue };
        if take > free.len() {
            continue;
        }
        for mask in 0u32..(1u32 << free.len()) {
            if mask.count_ones() as usize != take {
                continue;
            }
            let mut t1 = fixed.clone();
            let mut t2 = fixed.clone();
            for (b, &v) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    t1.push(v);
                } else {
                    t2.push(v);
                }
            }
            let (_, tour1) = brute_force_tsp(c, &t1);
            let (_, tour2) = brute_force_tsp(c, &t2);
            let cand = TwoTourSolution::from_tours(c, tour1, tour2);
            if best.as_ref().is_none_or(|b| cand.total < b.total) {
                best = Some(cand);
            }
        }
    }
    best.ok_or_else(|| Error::Infeasible("no balanced pair of tours exists".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::SymmetricCostMatrix;
    use crate::two_tsp::solve_balanced_2tsp;

    #[test]
    fn brute_force_on_diamond() {
        let d = SymmetricCostMatrix::from_rows(&[
            vec![0.0, 22.0, 40.0, 22.0],
            vec![22.0, 0.0, 22.0, 20.0],
            vec![40.0, 22.0, 0.0, 22.0],
            vec![22.0, 20.0, 22.0, 0.0],
        ])
        .unwrap();
        assert_eq!(brute_force_tsp(&d, &[0, 1, 2, 3]).0, 88.0);
    }

    #[test]
    fn dp_never_beats_oracle() {
        let c = SymmetricCostMatrix::from_fn(7, |i, j| ((i * 5 + j * 9 + i * j) % 13 + 1) as f64).unwrap();
        let inst = TwoTspInstance::new(c, &[0, 3, 5]).unwrap();
        let dp = solve_balanced_2tsp(&inst).unwrap();
        let or = oracle_2tsp(&inst).unwrap();
        assert!(dp.total >= or.total);
    }

    #[test]
    fn guard() {
        let inst = TwoTspInstance::new(SymmetricCostMatrix::zeros(18), &[0, 1]).unwrap();
        assert!(matches!(oracle_2tsp(&inst), Err(Error::SizeGuard(_))));
    }
}
