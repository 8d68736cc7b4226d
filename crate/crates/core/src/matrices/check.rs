use std::fmt;

use super::{RealMatrix, SymmetricCostMatrix};

const REL_EPS: f64 = 1e-9;

/// Absolute comparison tolerance for inequality checks on `c`.
pub fn tolerance(c: &SymmetricCostMatrix) -> f64 {
    REL_EPS * c.max_abs()
}

/// Which of the two Kalmanson inequalities failed for a quadruple
/// `i < j < l < m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// `c[i][j] + c[l][m] <= c[i][l] + c[j][m]`
    First,
    /// `c[i][m] + c[j][l] <= c[i][l] + c[j][m]`
    Second,
}

/// First violated condition found by a checker (0-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Quadruple { i: usize, j: usize, l: usize, m: usize, inequality: Inequality },
    Alpha { i: usize, j: usize },
    Beta { i: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Witness::Quadruple { i, j, l, m, inequality } => write!(
                f,
                "quadruple ({}, {}, {}, {}) violates {:?} inequality",
                i + 1,
                j + 1,
                l + 1,
                m + 1,
                inequality
            ),
            Witness::Alpha { i, j } => write!(f, "alpha({}, {}) < 0", i + 1, j + 1),
            Witness::Beta { i } => write!(f, "beta({}) < 0", i + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl CheckResult {
    fn ok() -> Self {
        CheckResult { holds: true, witness: None }
    }
    fn fail(w: Witness) -> Self {
        CheckResult { holds: false, witness: Some(w) }
    }
}

#[inline]
fn satisfied(lhs: f64, rhs: f64, eps: f64, strict: bool) -> bool {
    if strict {
        lhs + eps < rhs
    } else {
        lhs <= rhs + eps
    }
}

/// Checks both Kalmanson inequalities on every quadruple `i < j < l < m`.
/// The witness is the lexicographically smallest violating quadruple.
pub fn check_kalmanson(c: &SymmetricCostMatrix, strict: bool) -> CheckResult {
    let n = c.n();
    let eps = tolerance(c);
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                for m in l + 1..n {
                    let rhs = c.get(i, l) + c.get(j, m);
                    if !satisfied(c.get(i, j) + c.get(l, m), rhs, eps, strict) {
                        return CheckResult::fail(Witness::Quadruple {
                            i,
                            j,
                            l,
                            m,
                            inequality: Inequality::First,
                        });
                    }
                    if !satisfied(c.get(i, m) + c.get(j, l), rhs, eps, strict) {
                        return CheckResult::fail(Witness::Quadruple {
                            i,
                            j,
                            l,
                            m,
                            inequality: Inequality::Second,
                        });
                    }
                }
            }
        }
    }
    CheckResult::ok()
}

/// `alpha[i][j] = c[i][j] + c[i+1][j+1] - c[i][j+1] - c[i+1][j]` for
/// `0 <= i <= n-4`, `i+2 <= j <= n-2`, returned as `(i, j, value)` row-major.
pub fn kalmanson_alphas(c: &RealMatrix) -> Vec<(usize, usize, f64)> {
    let n = c.n();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(3) {
        for j in i + 2..n - 1 {
            let a = c.get(i, j) + c.get(i + 1, j + 1) - c.get(i, j + 1) - c.get(i + 1, j);
            out.push((i, j, a));
        }
    }
    out
}

/// `beta[i] = c[i][n-1] + c[i+1][0] - c[i][0] - c[i+1][n-1]` for
/// `1 <= i <= n-3`, returned as `(i, value)`.
pub fn kalmanson_betas(c: &RealMatrix) -> Vec<(usize, f64)> {
    let n = c.n();
    let last = n.saturating_sub(1);
    (1..n.saturating_sub(2))
        .map(|i| (i, c.get(i, last) + c.get(i + 1, 0) - c.get(i, 0) - c.get(i + 1, last)))
        .collect()
}

fn as_real(c: &SymmetricCostMatrix) -> RealMatrix {
    let n = c.n();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| c.row(i).to_vec()).collect();
    RealMatrix::from_rows(&rows).expect("square by construction")
}

/// Kalmanson recognition through the adjacent-index characterisation:
/// every alpha and beta is nonnegative (within tolerance).
pub fn check_kalmanson_adjacent(c: &SymmetricCostMatrix) -> CheckResult {
    if c.n() < 4 {
        return CheckResult::ok();
    }
    let eps = tolerance(c);
    let r = as_real(c);
    if let Some(&(i, j, _)) = kalmanson_alphas(&r).iter().find(|(_, _, a)| *a < -eps) {
        return CheckResult::fail(Witness::Alpha { i, j });
    }
    if let Some(&(i, _)) = kalmanson_betas(&r).iter().find(|(_, b)| *b < -eps) {
        return CheckResult::fail(Witness::Beta { i });
    }
    CheckResult::ok()
}

/// `c[i][j] + c[l][m] <= c[i][l] + c[j][m]` for all `i < j < l < m`.
pub fn check_demidenko(c: &SymmetricCostMatrix) -> CheckResult {
    let n = c.n();
    let eps = tolerance(c);
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                for m in l + 1..n {
                    if !satisfied(c.get(i, j) + c.get(l, m), c.get(i, l) + c.get(j, m), eps, false) {
                        return CheckResult::fail(Witness::Quadruple {
                            i,
                            j,
                            l,
                            m,
                            inequality: Inequality::First,
                        });
                    }
                }
            }
        }
    }
    CheckResult::ok()
}

/// `c'[i][j] = c[i][j] - c[i][0] - c[0][j]` for `i, j >= 1`; row and
/// column 0 are zero.
pub fn zero_transform(c: &SymmetricCostMatrix) -> RealMatrix {
    let n = c.n();
    let mut out = RealMatrix::zeros(n);
    for i in 1..n {
        for j in 1..n {
            out.set(i, j, c.get(i, j) - c.get(i, 0) - c.get(0, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> SymmetricCostMatrix {
        SymmetricCostMatrix::from_rows(&[
            vec![0., 5., 3., 5., 2.],
            vec![5., 0., 0., 4., 4.],
            vec![3., 0., 0., 0., 1.],
            vec![5., 4., 0., 0., 2.],
            vec![2., 4., 1., 2., 0.],
        ])
        .unwrap()
    }

    #[test]
    fn small_orders_hold_vacuously() {
        let c = SymmetricCostMatrix::from_fn(3, |i, j| (i + j) as f64).unwrap();
        assert_eq!(check_kalmanson(&c, true), CheckResult::ok());
        assert!(check_kalmanson_adjacent(&c).holds);
        assert!(check_demidenko(&c).holds);
    }

    #[test]
    fn zero_matrix_is_kalmanson_but_not_strong() {
        let z = SymmetricCostMatrix::zeros(4);
        assert!(check_kalmanson(&z, false).holds);
        assert!(!check_kalmanson(&z, true).holds);
        assert!(check_demidenko(&z).holds);
    }

    #[test]
    fn c4_is_kalmanson_and_demidenko() {
        assert!(check_kalmanson(&c4(), false).holds);
        assert!(check_kalmanson_adjacent(&c4()).holds);
        assert!(check_demidenko(&c4()).holds);
    }

    #[test]
    fn raising_c24_breaks_adjacent_check() {
        let mut rows: Vec<Vec<f64>> = (0..5).map(|i| c4().row(i).to_vec()).collect();
        rows[1][3] += 10.0;
        rows[3][1] += 10.0;
        let c = SymmetricCostMatrix::from_rows(&rows).unwrap();
        // alpha(1,4) = c14 + c25 - c15 - c24 = 5 + 4 - 2 - 14 = -7
        let r = check_kalmanson_adjacent(&c);
        assert!(!r.holds);
        assert_eq!(r.witness, Some(Witness::Alpha { i: 0, j: 3 }));
        assert!(!check_kalmanson(&c, false).holds);
    }

    #[test]
    fn zero_transform_of_diamond() {
        let d = SymmetricCostMatrix::from_rows(&[
            vec![0., 22., 40., 22.],
            vec![22., 0., 22., 20.],
            vec![40., 22., 0., 22.],
            vec![22., 20., 22., 0.],
        ])
        .unwrap();
        let z = zero_transform(&d);
        assert_eq!(z.get(1, 2), -40.0);
        assert_eq!(z.get(1, 3), -24.0);
        assert_eq!(z.get(2, 3), -40.0);
        assert!((0..4).all(|j| z.get(0, j) == 0.0 && z.get(j, 0) == 0.0));
    }
}
