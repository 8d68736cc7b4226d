//! Dense cost matrices, permutations and structural property checks.

mod check;
mod io;
mod permutation;

pub use check::{
    check_demidenko, check_kalmanson, check_kalmanson_adjacent, kalmanson_alphas,
    kalmanson_betas, tolerance, zero_transform, CheckResult, Inequality, Witness,
};
pub use io::{parse_matrix_block, read_matrix_file, write_matrix};
pub use permutation::Permutation;

use crate::{Error, Result};

/// Read access to an n×n cost matrix.
pub trait Costs {
    fn order(&self) -> usize;
    fn cost(&self, i: usize, j: usize) -> f64;

    /// Length of the closed tour visiting `nodes` in order.
    fn tour_length(&self, nodes: &[usize]) -> f64 {
        match nodes.len() {
            0 | 1 => 0.0,
            len => {
                let open: f64 = nodes.windows(2).map(|w| self.cost(w[0], w[1])).sum();
                open + self.cost(nodes[len - 1], nodes[0])
            }
        }
    }
}

impl<C: Costs + ?Sized> Costs for &C {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn cost(&self, i: usize, j: usize) -> f64 {
        (**self).cost(i, j)
    }
}

/// Symmetric nonnegative matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricCostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricCostMatrix {
    /// Builds a matrix from row-major entries, rejecting asymmetric,
    /// negative, non-finite or nonzero-diagonal input.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {}", i + 1)));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({}, {}) = {v} is not a finite nonnegative cost",
                        i + 1,
                        j + 1
                    )));
                }
                if v != data[j * n + i] {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric entries at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(SymmetricCostMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows of unequal length".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn zeros(n: usize) -> Self {
        SymmetricCostMatrix { n, data: vec![0.0; n * n] }
    }

    /// Symmetric matrix from a generator of the upper triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self::new(n, data)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `result[i][j] == self[σ(i)][σ(j)]`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.order() != self.n {
            return Err(Error::OrderMismatch { expected: self.n, got: sigma.order() });
        }
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = self.get(sigma.get(i), sigma.get(j));
            }
        }
        Ok(SymmetricCostMatrix { n, data })
    }

    /// Induced submatrix on `nodes`, in the given order.
    pub fn submatrix(&self, nodes: &[usize]) -> Self {
        let k = nodes.len();
        let mut data = vec![0.0; k * k];
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate() {
                data[a * k + b] = self.get(u, v);
            }
        }
        SymmetricCostMatrix { n: k, data }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.n, self.data.iter().map(|v| v * factor).collect())
    }

    pub fn to_asymmetric(&self) -> AsymmetricCostMatrix {
        AsymmetricCostMatrix { n: self.n, data: self.data.clone() }
    }
}

impl Costs for SymmetricCostMatrix {
    fn order(&self) -> usize {
        self.n
    }
    #[inline]
    fn cost(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
}

/// Square matrix with zero diagonal whose off-diagonal entries are
/// nonnegative or `f64::INFINITY` (a forbidden arc). Infinity propagates
/// through addition, so DP sums never overflow into finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricCostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl AsymmetricCostMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {}", i + 1)));
            }
        }
        if let Some(pos) = data.iter().position(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is negative or NaN",
                pos / n + 1,
                pos % n + 1
            )));
        }
        Ok(AsymmetricCostMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows of unequal length".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    data[i * n + j] = f(i, j);
                }
            }
        }
        Self::new(n, data)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.order() != self.n {
            return Err(Error::OrderMismatch { expected: self.n, got: sigma.order() });
        }
        Self::new(self.n, {
            let n = self.n;
            let mut data = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    data[i * n + j] = self.get(sigma.get(i), sigma.get(j));
                }
            }
            data
        })
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.n, self.data.iter().map(|v| v * factor).collect())
    }
}

impl Costs for AsymmetricCostMatrix {
    fn order(&self) -> usize {
        self.n
    }
    #[inline]
    fn cost(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
}

/// Plain real square matrix; entries may be negative. Produced by
/// [`zero_transform`] and by the generator's intermediate stages.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        RealMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows of unequal length".into()));
        }
        Ok(RealMatrix { n, data: rows.concat() })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Sets `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, v);
        self.set(j, i, v);
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl Costs for RealMatrix {
    fn order(&self) -> usize {
        self.n
    }
    #[inline]
    fn cost(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
}

/// A cost matrix seen through a relabelling: `cost(i, j) = inner[σ(i)][σ(j)]`.
#[derive(Debug, Clone, Copy)]
pub struct Relabeled<'a, C: ?Sized> {
    pub inner: &'a C,
    pub map: &'a [usize],
}

impl<C: Costs + ?Sized> Costs for Relabeled<'_, C> {
    fn order(&self) -> usize {
        self.map.len()
    }
    #[inline]
    fn cost(&self, i: usize, j: usize) -> f64 {
        self.inner.cost(self.map[i], self.map[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_and_negative() {
        assert!(SymmetricCostMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(SymmetricCostMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(SymmetricCostMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(SymmetricCostMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).is_ok());
    }

    #[test]
    fn asymmetric_accepts_infinity() {
        let inf = f64::INFINITY;
        let m = AsymmetricCostMatrix::from_rows(&[vec![0.0, inf], vec![3.0, 0.0]]).unwrap();
        assert_eq!(m.get(0, 1), inf);
        assert_eq!(m.get(0, 1) + 5.0, inf);
        assert!(AsymmetricCostMatrix::from_rows(&[vec![0.0, f64::NAN], vec![3.0, 0.0]]).is_err());
    }

    #[test]
    fn permute_identity_and_inverse() {
        let c = SymmetricCostMatrix::from_fn(5, |i, j| (i * 7 + j * 3) as f64).unwrap();
        let id = Permutation::identity(5);
        assert_eq!(c.permute(&id).unwrap(), c);
        let s = Permutation::new(vec![2, 0, 4, 1, 3]).unwrap();
        let back = c.permute(&s).unwrap().permute(&s.inverse()).unwrap();
        assert_eq!(back, c);
        assert!(c.permute(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn tour_length_closes_cycle() {
        let c = SymmetricCostMatrix::from_rows(&[
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 4.0],
            vec![2.0, 4.0, 0.0],
        ])
        .unwrap();
        assert_eq!(c.tour_length(&[0, 1, 2]), 7.0);
    }
}
