use super::{solve_balanced_2tsp, TwoTourSolution, TwoTspInstance};
use crate::matrices::Costs;
use crate::{Error, Result};

/// Optimal value of the balanced 2TSP in `O(n^2)` memory.
///
/// Keeps, for the current level `j`, the rows `V(i, j, .)`, `V(j, i, .)` and
/// the diagonal `V(j, j, .)`, sweeping `j` downwards.
pub fn solve_balanced_2tsp_lowmem(inst: &TwoTspInstance) -> Result<f64> {
    let n = inst.n();
    let c = inst.matrix();
    let (lo, hi) = inst.tour_sizes();
    let width = hi + 2;
    let inf = f64::INFINITY;
    let accept = |m: usize| m == lo || m == hi;
    let top = n - 1;

    // mv[i][m] = V(i, j, m), mw[i][m] = V(j, i, m) for i < j.
    let mut mv = vec![inf; n * width];
    let mut mw = vec![inf; n * width];
    let mut diag = vec![inf; width];
    for i in 0..top {
        for m in (1..=hi).filter(|&m| accept(m)) {
            mv[i * width + m] = c.get(i, 0) + c.get(0, top);
            mw[i * width + m] = c.get(top, 0) + c.get(0, i);
        }
    }
    if inst.is_fixed(top) {
        for m in (1..=hi).filter(|&m| accept(m)) {
            diag[m] = c.get(top, 0) + c.get(0, top);
        }
    }

    let mut new_diag = vec![inf; width];
    let mut row_v = vec![inf; width];
    let mut row_w = vec![inf; width];
    for j in (1..top).rev() {
        let q = j + 1;
        let fixed = inst.is_fixed(q);
        let (jv, jw) = (j * width, j * width);
        for m in 1..=hi {
            new_diag[m] = if fixed {
                c.get(j, q) + c.get(q, j) + diag[m + 1]
            } else {
                (c.get(j, q) + mw[jw + m]).min(c.get(q, j) + mv[jv + m + 1])
            };
        }
        for i in 0..j {
            let base = i * width;
            for m in 1..=hi {
                if fixed {
                    row_v[m] = c.get(i, q) + c.get(q, j) + diag[m + 1];
                    row_w[m] = c.get(j, q) + c.get(q, i) + diag[m + 1];
                } else {
                    row_v[m] = (c.get(i, q) + mw[jw + m]).min(c.get(q, j) + mv[base + m + 1]);
                    row_w[m] = (c.get(j, q) + mw[base + m]).min(c.get(q, i) + mv[jv + m + 1]);
                }
            }
            mv[base..base + width].copy_from_slice(&row_v);
            mw[base..base + width].copy_from_slice(&row_w);
        }
        std::mem::swap(&mut diag, &mut new_diag);
    }

    let best = if inst.is_fixed(1) {
        c.get(0, 1) + c.get(1, 0) + diag[2]
    } else {
        (c.get(0, 1) + mw[1]).min(c.get(1, 0) + mv[2])
    };
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Infeasible("no balanced pair of tours exists".into()))
    }
}

/// Low-memory value plus a second pass that recovers the tours.
pub fn solve_balanced_2tsp_lowmem_tours(inst: &TwoTspInstance) -> Result<(f64, TwoTourSolution)> {
    let value = solve_balanced_2tsp_lowmem(inst)?;
    let tours = solve_balanced_2tsp(inst)?;
    let recomputed = inst.matrix().tour_length(&tours.tour1) + inst.matrix().tour_length(&tours.tour2);
    debug_assert!((recomputed - value).abs() <= 1e-9 * value.abs().max(1.0));
    Ok((value, tours))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::SymmetricCostMatrix;
    use crate::two_tsp::Balance;

    #[test]
    fn matches_cubic_solver() {
        for n in 2..12 {
            let c = SymmetricCostMatrix::from_fn(n, |i, j| ((i * 31 + j * 17) % 23) as f64).unwrap();
            for fixed in [vec![0], vec![0, n - 1], vec![0, n / 2]] {
                let mut fixed = fixed;
                fixed.dedup();
                for balance in [Balance::Exact, Balance::Near] {
                    let Ok(inst) = TwoTspInstance::with_balance(c.clone(), &fixed, balance) else {
                        continue;
                    };
                    let cubic = solve_balanced_2tsp(&inst).map(|s| s.total).ok();
                    let low = solve_balanced_2tsp_lowmem(&inst).ok();
                    assert_eq!(cubic, low, "n={n} fixed={fixed:?} {balance:?}");
                }
            }
        }
    }
}
