use std::fmt;

use crate::{Error, Result};

/// Bijection on `0..order`; `get(i)` is the node placed at position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[v] = true;
        }
        Ok(Permutation(images))
    }

    /// From 1-based labels, as written in the literature and in files.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::InvalidPermutation("labels are 1-based".into()));
        }
        Self::new(labels.iter().map(|l| l - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (pos, &v) in self.0.iter().enumerate() {
            inv[v] = pos;
        }
        Permutation(inv)
    }

    /// `result(i) = self((i + k) mod n)`.
    pub fn cyclic_shift(&self, k: usize) -> Self {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        Permutation((0..n).map(|i| self.0[(i + k) % n]).collect())
    }

    /// `result(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if other.order() != self.order() {
            return Err(Error::OrderMismatch { expected: self.order(), got: other.order() });
        }
        Ok(Permutation(other.0.iter().map(|&i| self.0[i]).collect()))
    }

    pub fn reversed(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// Rotation of this cyclic order that starts with `node`.
    pub fn rotated_to(&self, node: usize) -> Self {
        match self.0.iter().position(|&v| v == node) {
            Some(k) => self.cyclic_shift(k),
            None => self.clone(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_shift_matches_belperm_illustration() {
        let id = Permutation::identity(5);
        assert_eq!(id.cyclic_shift(1).labels(), vec![2, 3, 4, 5, 1]);
        assert_eq!(id.cyclic_shift(3).labels(), vec![4, 5, 1, 2, 3]);
        assert_eq!(id.cyclic_shift(0), id);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_labels(&[0, 1]).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::from_labels(&[3, 2, 4, 1, 5]).unwrap();
        assert_eq!(p.compose(&p.inverse()).unwrap(), Permutation::identity(5));
        assert_eq!(p.to_string(), "(3,2,4,1,5)");
        assert_eq!(p.rotated_to(0).labels(), vec![1, 5, 3, 2, 4]);
    }
}
