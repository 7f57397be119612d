//! Symmetric bilinear forms and symmetric trilinear tensors over GF(2).
//!
//! The central fact implemented here: for any symmetric form `λ` on a
//! GF(2)-vector space, the characteristic functional `γ(λ)(v) = λ(v, v)` is
//! linear and lies in the image of the adjoint `λ̂ : V → V*`. In matrix terms,
//! the diagonal of a symmetric bit matrix lies in its column space.
//! [`Z2SymForm::solve_diagonal`] finds the witness and
//! [`Z2SymForm::decompose_zero_nonsingular`] exhibits the splitting
//! `λ ≅ 0 ⊕ λ_ns` that makes the fact true.

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("tensor entry ({0}, {1}, {2}) disagrees with a permuted entry")]
    NotSymmetricTensor(usize, usize, usize),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("vector of length {found} does not live in dimension {dim}")]
    WrongLength { found: usize, dim: usize },
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
}

/// A symmetric bilinear form `λ(v, w) = vᵀ A w` over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2SymForm {
    matrix: BitMatrix,
}

/// `Pᵀ A P = 0_r ⊕ B` with `B` nonsingular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroNonsingularSplit {
    /// Basis of the radical `ker(λ̂)`; these are the first `r` columns of `change_of_basis`.
    pub radical: Vec<BitVector>,
    /// Invertible `P`, columns are the new basis vectors.
    pub change_of_basis: BitMatrix,
    pub nonsingular: Z2SymForm,
}

impl Z2SymForm {
    pub fn new(matrix: BitMatrix) -> Result<Self, FormError> {
        if !matrix.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        Ok(Z2SymForm { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Z2SymForm {
            matrix: BitMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Z2SymForm {
            matrix: BitMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn eval(&self, v: &BitVector, w: &BitVector) -> bool {
        v.dot(&self.matrix.mul_vec(w))
    }

    /// The adjoint `λ̂(v) = λ(v, ·)`, as a coordinate vector in `V*`.
    pub fn adjoint(&self, v: &BitVector) -> BitVector {
        self.matrix.mul_vec(v)
    }

    /// `γ(λ) : v ↦ λ(v, v)`; on the standard basis this is the diagonal.
    pub fn characteristic(&self) -> BitVector {
        self.matrix.diagonal()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.matrix.is_invertible()
    }

    pub fn orthogonal_sum(&self, other: &Z2SymForm) -> Z2SymForm {
        let n = self.dim();
        let m = other.dim();
        let mut a = BitMatrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, self.matrix.get(i, j));
            }
        }
        for i in 0..m {
            for j in 0..m {
                a.set(n + i, n + j, other.matrix.get(i, j));
            }
        }
        Z2SymForm { matrix: a }
    }

    /// `Pᵀ A P` for a change of basis `P`.
    pub fn change_basis(&self, p: &BitMatrix) -> Z2SymForm {
        let m = p.transpose().mul(&self.matrix).mul(p);
        Z2SymForm { matrix: m }
    }

    /// A vector `d` with `λ̂(d) = γ(λ)`, i.e. `A·d = diag(A)`.
    ///
    /// Among all solutions the one returned is least as a binary number
    /// with coordinate 0 the low bit, so `{{1,1},{1,1}}` gives `(1, 0)`.
    ///
    /// # Panics
    ///
    /// A solution always exists for a symmetric matrix; failing to find one
    /// means the elimination is broken and is treated as fatal.
    pub fn solve_diagonal(&self) -> BitVector {
        self.matrix
            .solve(&self.characteristic())
            .expect("diagonal of a symmetric GF(2) matrix must lie in its column space")
    }

    pub fn radical(&self) -> Vec<BitVector> {
        self.matrix.kernel_basis()
    }

    /// Splits off the radical: the first columns of `P` span `ker(λ̂)`, the
    /// rest are the standard basis vectors completing it, taken in order.
    pub fn decompose_zero_nonsingular(&self) -> ZeroNonsingularSplit {
        let n = self.dim();
        let radical = self.radical();
        let mut basis = radical.clone();
        for i in 0..n {
            if basis.len() == n {
                break;
            }
            let e = BitVector::unit(n, i);
            let mut candidate = basis.clone();
            candidate.push(e);
            if BitMatrix::from_columns(n, &candidate).rank() == candidate.len() {
                basis = candidate;
            }
        }
        let p = BitMatrix::from_columns(n, &basis);
        let transformed = self.change_basis(&p);
        let r = radical.len();
        let rest: Vec<usize> = (r..n).collect();
        let block = transformed.matrix.submatrix(&rest, &rest);
        let nonsingular = Z2SymForm::new(block).expect("congruent block stays symmetric");
        debug_assert!(nonsingular.is_nonsingular());
        ZeroNonsingularSplit {
            radical,
            change_of_basis: p,
            nonsingular,
        }
    }
}

/// A fully symmetric trilinear form `T : V × V × V → GF(2)`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2Trilinear {
    dim: usize,
    entries: Vec<bool>,
}

impl Z2Trilinear {
    pub fn zero(dim: usize) -> Self {
        Z2Trilinear {
            dim,
            entries: vec![false; dim * dim * dim],
        }
    }

    /// The tensor equal to 1 on every permutation of each listed triple and
    /// 0 elsewhere. Listing two permutations of the same triple is harmless.
    pub fn from_triples(dim: usize, triples: &[[usize; 3]]) -> Result<Self, FormError> {
        let mut t = Self::zero(dim);
        for &[i, j, k] in triples {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(FormError::IndexOutOfRange { index, dim });
                }
            }
            t.set_orbit(i, j, k, true);
        }
        Ok(t)
    }

    /// Builds from a dense table; rejects tables that are not symmetric.
    pub fn from_dense(dim: usize, entry: impl Fn(usize, usize, usize) -> bool) -> Result<Self, FormError> {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    t.entries[(i * dim + j) * dim + k] = entry(i, j, k);
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let v = t.get(i, j, k);
                    if v != t.get(j, i, k) || v != t.get(i, k, j) {
                        return Err(FormError::NotSymmetricTensor(i, j, k));
                    }
                }
            }
        }
        Ok(t)
    }

    fn set_orbit(&mut self, i: usize, j: usize, k: usize, value: bool) {
        let d = self.dim;
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            self.entries[(a * d + b) * d + c] = value;
        }
    }

    /// A copy with the orbit of `(i, j, k)` set to `value`.
    pub fn with_entry(&self, i: usize, j: usize, k: usize, value: bool) -> Self {
        let mut t = self.clone();
        t.set_orbit(i, j, k, value);
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.entries[(i * self.dim + j) * self.dim + k]
    }

    /// `T(a, b, c)` extended trilinearly.
    pub fn eval(&self, a: &BitVector, b: &BitVector, c: &BitVector) -> bool {
        let mut acc = false;
        for i in a.support() {
            for j in b.support() {
                for k in c.support() {
                    acc ^= self.get(i, j, k);
                }
            }
        }
        acc
    }

    /// Sorted triples `i ≤ j ≤ k` with `T(i, j, k) = 1`, one per orbit.
    pub fn nonzero_triples(&self) -> Vec<[usize; 3]> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    if self.get(i, j, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// The form `(y, z) ↦ T(b_y, x, b_z)` on the span of `basis`.
    pub fn form_from_trilinear(&self, x: &BitVector, basis: &[BitVector]) -> Result<Z2SymForm, FormError> {
        for v in std::iter::once(x).chain(basis) {
            if v.len() != self.dim {
                return Err(FormError::WrongLength {
                    found: v.len(),
                    dim: self.dim,
                });
            }
        }
        if BitMatrix::from_columns(self.dim, basis).rank() != basis.len() {
            return Err(FormError::DependentBasis);
        }
        let n = basis.len();
        let mut a = BitMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, self.eval(&basis[i], x, &basis[j]));
            }
        }
        Ok(Z2SymForm::new(a).expect("slice of a symmetric tensor is symmetric"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(rows: &[&[u8]]) -> Z2SymForm {
        Z2SymForm::new(BitMatrix::from_u8_rows(rows)).unwrap()
    }

    #[test]
    fn identity_witness_is_all_ones() {
        for n in 0..6 {
            assert_eq!(Z2SymForm::identity(n).solve_diagonal(), BitVector::ones(n));
        }
    }

    #[test]
    fn zero_form_witness_is_zero() {
        assert_eq!(Z2SymForm::zero(4).solve_diagonal(), BitVector::zeros(4));
    }

    #[test]
    fn all_ones_plane() {
        let d = form(&[&[1, 1], &[1, 1]]).solve_diagonal();
        assert_eq!(d, BitVector::from_u8s(&[1, 0]));
    }

    #[test]
    fn rejects_asymmetric() {
        let m = BitMatrix::from_u8_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(Z2SymForm::new(m), Err(FormError::NotSymmetric));
    }

    #[test]
    fn decompose_zero_form() {
        let split = Z2SymForm::zero(3).decompose_zero_nonsingular();
        assert_eq!(split.radical.len(), 3);
        assert_eq!(split.nonsingular.dim(), 0);
    }

    #[test]
    fn decompose_hyperbolic_plane() {
        let h = form(&[&[0, 1], &[1, 0]]);
        let split = h.decompose_zero_nonsingular();
        assert!(split.radical.is_empty());
        assert_eq!(split.nonsingular, h);
    }

    #[test]
    fn decompose_all_ones_plane() {
        let a = form(&[&[1, 1], &[1, 1]]);
        let split = a.decompose_zero_nonsingular();
        assert_eq!(split.radical, vec![BitVector::from_u8s(&[1, 1])]);
        assert_eq!(split.nonsingular, form(&[&[1]]));
        let congruent = a.change_basis(&split.change_of_basis);
        assert_eq!(congruent, Z2SymForm::zero(1).orthogonal_sum(&form(&[&[1]])));
    }

    #[test]
    fn tensor_from_triples_is_symmetric() {
        let t = Z2Trilinear::from_triples(2, &[[1, 1, 0], [1, 0, 0]]).unwrap();
        assert!(t.get(0, 1, 1) && t.get(1, 0, 1) && t.get(0, 0, 1));
        assert!(!t.get(1, 1, 1));
        assert_eq!(t.nonzero_triples(), vec![[0, 0, 1], [0, 1, 1]]);
    }

    #[test]
    fn dense_tensor_must_be_symmetric() {
        let err = Z2Trilinear::from_dense(2, |i, j, k| (i, j, k) == (0, 0, 1));
        assert!(matches!(err, Err(FormError::NotSymmetricTensor(..))));
        let ok = Z2Trilinear::from_dense(2, |i, j, k| i + j + k == 1).unwrap();
        assert_eq!(ok.nonzero_triples(), vec![[0, 0, 1]]);
    }

    #[test]
    fn out_of_range_triple() {
        assert_eq!(
            Z2Trilinear::from_triples(2, &[[0, 0, 2]]),
            Err(FormError::IndexOutOfRange { index: 2, dim: 2 })
        );
    }

    #[test]
    fn slices() {
        // basis {t, x}: T(x,x,t) = T(x,t,t) = 1
        let t = Z2Trilinear::from_triples(2, &[[1, 1, 0], [1, 0, 0]]).unwrap();
        let x = BitVector::from_u8s(&[0, 1]);
        let tvec = BitVector::from_u8s(&[1, 0]);
        let lam = t.form_from_trilinear(&x, std::slice::from_ref(&tvec)).unwrap();
        assert_eq!(lam, form(&[&[1]]));
        let zero = t.form_from_trilinear(&BitVector::zeros(2), std::slice::from_ref(&tvec)).unwrap();
        assert_eq!(zero, Z2SymForm::zero(1));
        assert_eq!(t.form_from_trilinear(&x, &[]).unwrap().dim(), 0);
        assert_eq!(
            t.form_from_trilinear(&x, &[tvec.clone(), tvec]),
            Err(FormError::DependentBasis)
        );
    }
}
