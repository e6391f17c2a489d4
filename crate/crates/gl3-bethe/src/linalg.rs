//! Sparse exact linear algebra on the chain Hilbert space.
//!
//! States and operators are kept as ordered maps with rational entries; zeros
//! are never stored, so equality of maps is exact equality of tensors. Sizes
//! here are tiny (dimension 3^L with L ≤ 8), the point is exactness, not
//! throughput.

use crate::ratfun::Scalar;
use num::Zero;
use std::collections::BTreeMap;

/// A vector in the 3^L-dimensional chain space (or a covector — the data is
/// the same, application order differs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector {
    dim: usize,
    coeffs: BTreeMap<usize, Scalar>,
}

impl StateVector {
    pub fn zero(dim: usize) -> Self {
        StateVector { dim, coeffs: BTreeMap::new() }
    }

    /// The basis vector `coeff · e_idx`.
    pub fn basis(dim: usize, idx: usize, coeff: Scalar) -> Self {
        assert!(idx < dim, "basis index out of range");
        let mut v = StateVector::zero(dim);
        v.add_coeff(idx, coeff);
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient at `idx` (zero if absent).
    pub fn coeff(&self, idx: usize) -> Scalar {
        self.coeffs.get(&idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn add_coeff(&mut self, idx: usize, c: Scalar) {
        debug_assert!(idx < self.dim);
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &StateVector, k: &Scalar) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if k.is_zero() {
            return;
        }
        for (i, c) in other.iter() {
            self.add_coeff(i, c * k);
        }
    }

    pub fn scale(&mut self, k: &Scalar) {
        if k.is_zero() {
            self.coeffs.clear();
            return;
        }
        for c in self.coeffs.values_mut() {
            *c *= k;
        }
    }

    pub fn scaled(&self, k: &Scalar) -> StateVector {
        let mut v = self.clone();
        v.scale(k);
        v
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        let mut v = self.clone();
        v.add_scaled(other, &-Scalar::from_integer(1.into()));
        v
    }

    /// First stored coefficient in basis order, if any.
    pub fn first_nonzero(&self) -> Option<(usize, &Scalar)> {
        self.coeffs.iter().next().map(|(&i, c)| (i, c))
    }

    /// Entrywise product embedding for vectors with disjoint digit support:
    /// `out[i + j] = self[i] · other[j]`. Callers guarantee the supports live
    /// on disjoint base-3 digit positions, so index addition is digit-wise
    /// concatenation (no carries).
    pub fn tensor_merge(&self, other: &StateVector) -> StateVector {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = StateVector::zero(self.dim);
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                out.add_coeff(i + j, a * b);
            }
        }
        out
    }
}

/// Sparse square operator on the chain space; entries keyed `(row, col)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    dim: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMat {
    pub fn zero(dim: usize) -> Self {
        SparseMat { dim, entries: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SparseMat::zero(dim);
        for i in 0..dim {
            m.entries.insert((i, i), Scalar::from_integer(1.into()));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Scalar)> {
        self.entries.iter().map(|(&rc, v)| (rc, v))
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert!(r < self.dim && c < self.dim);
        if v.is_zero() {
            return;
        }
        match self.entries.entry((r, c)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&mut self, k: &Scalar) {
        if k.is_zero() {
            self.entries.clear();
            return;
        }
        for v in self.entries.values_mut() {
            *v *= k;
        }
    }

    pub fn scaled(&self, k: &Scalar) -> SparseMat {
        let mut m = self.clone();
        m.scale(k);
        m
    }

    pub fn add_scaled(&mut self, other: &SparseMat, k: &Scalar) {
        assert_eq!(self.dim, other.dim);
        if k.is_zero() {
            return;
        }
        for ((r, c), v) in other.iter() {
            self.add_entry(r, c, v * k);
        }
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        let mut m = self.clone();
        m.add_scaled(other, &-Scalar::from_integer(1.into()));
        m
    }

    /// `M · v` (column action).
    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.dim, v.dim(), "dimension mismatch");
        let mut out = StateVector::zero(self.dim);
        for ((r, c), m) in self.iter() {
            let x = v.coeff(c);
            if !x.is_zero() {
                out.add_coeff(r, m * x);
            }
        }
        out
    }

    /// `vᵀ · M` (row action, for covectors).
    pub fn apply_dual(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.dim, v.dim(), "dimension mismatch");
        let mut out = StateVector::zero(self.dim);
        for ((r, c), m) in self.iter() {
            let x = v.coeff(r);
            if !x.is_zero() {
                out.add_coeff(c, m * x);
            }
        }
        out
    }

    /// `self · other`.
    pub fn matmul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.dim, other.dim);
        let mut out = SparseMat::zero(self.dim);
        for ((r, k), a) in self.iter() {
            for ((_, c), b) in other.entries.range((k, 0)..=(k, usize::MAX)) {
                out.add_entry(r, *c, a * b);
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zero(self.dim);
        for ((r, c), v) in self.iter() {
            out.add_entry(c, r, v.clone());
        }
        out
    }

    /// First stored entry in `(row, col)` order, if any.
    pub fn first_nonzero(&self) -> Option<((usize, usize), &Scalar)> {
        self.entries.iter().next().map(|(&rc, v)| (rc, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{int, rat};

    #[test]
    fn vector_arithmetic_drops_zeros() {
        let mut v = StateVector::zero(4);
        v.add_coeff(1, rat(1, 2));
        v.add_coeff(1, rat(-1, 2));
        assert!(v.is_zero());
        v.add_coeff(2, int(3));
        let w = v.scaled(&rat(1, 3));
        assert_eq!(w.coeff(2), int(1));
        assert_eq!(w.sub(&w), StateVector::zero(4));
    }

    #[test]
    fn matrix_application_and_product_agree_with_dense_oracle() {
        // M = [[1, 2], [3, 0]], N = [[0, 1], [1, 1]] on dim 2
        let mut m = SparseMat::zero(2);
        m.add_entry(0, 0, int(1));
        m.add_entry(0, 1, int(2));
        m.add_entry(1, 0, int(3));
        let mut n = SparseMat::zero(2);
        n.add_entry(0, 1, int(1));
        n.add_entry(1, 0, int(1));
        n.add_entry(1, 1, int(1));
        // M·N = [[2, 3], [0, 3]]
        let p = m.matmul(&n);
        assert_eq!(p.entry(0, 0), int(2));
        assert_eq!(p.entry(0, 1), int(3));
        assert_eq!(p.entry(1, 0), int(0));
        assert_eq!(p.entry(1, 1), int(3));
        // column action
        let mut v = StateVector::zero(2);
        v.add_coeff(0, int(1));
        v.add_coeff(1, int(4));
        let mv = m.apply(&v); // (1 + 8, 3) = (9, 3)
        assert_eq!(mv.coeff(0), int(9));
        assert_eq!(mv.coeff(1), int(3));
        // row action: vᵀ·M = (1·1 + 4·3, 1·2) = (13, 2)
        let vm = m.apply_dual(&v);
        assert_eq!(vm.coeff(0), int(13));
        assert_eq!(vm.coeff(1), int(2));
        // transpose inverts the index pair
        assert_eq!(m.transpose().entry(1, 0), int(2));
    }

    #[test]
    fn tensor_merge_concatenates_digit_supports() {
        // dim 9 = two base-3 digits; v lives on digit 0, w on digit 1
        let v = StateVector::basis(9, 2, int(5));
        let w = StateVector::basis(9, 3, int(7)); // 3 = digit 1 set to 1
        let m = v.tensor_merge(&w);
        assert_eq!(m.coeff(5), int(35)); // 2 + 3
        assert_eq!(m.support_len(), 1);
    }
}
