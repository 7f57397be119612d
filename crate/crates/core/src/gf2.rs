//! Dense vectors and matrices over GF(2).
//!
//! Dimensions in this crate are desk-sized (a few dozen at most), so bits are
//! stored one per `bool` and every routine is a plain Gaussian elimination.

use std::fmt;
use std::ops::{Add, AddAssign};

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        BitVector(vec![true; len])
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = true;
        v
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitVector(bits)
    }

    /// Builds a vector from 0/1 entries; any nonzero entry counts as 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        BitVector(bits.iter().map(|&b| b != 0).collect())
    }

    /// The vector whose coordinate `i` is bit `i` of `value`.
    pub fn from_index(len: usize, value: u64) -> Self {
        BitVector((0..len).map(|i| (value >> i) & 1 == 1).collect())
    }

    /// Inverse of [`BitVector::from_index`]. Panics above 64 coordinates.
    pub fn to_index(&self) -> u64 {
        assert!(self.len() <= 64, "vector too long to index");
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= true;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| !b)
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len(), other.len(), "dot product length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .fold(false, |acc, (&a, &b)| acc ^ (a & b))
    }

    /// Concatenation `self ⊕ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitVector(bits)
    }

    /// Iterates over all `2^len` vectors in increasing [`BitVector::to_index`] order.
    pub fn all(len: usize) -> impl Iterator<Item = BitVector> {
        assert!(len < 64, "cannot enumerate 2^{len} vectors");
        (0..1u64 << len).map(move |i| BitVector::from_index(len, i))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitVector {
    type Err = String;

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit {other:?} in {s:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitVector)
    }
}

impl AddAssign<&BitVector> for BitVector {
    fn add_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        for (a, &b) in self.0.iter_mut().zip(&rhs.0) {
            *a ^= b;
        }
    }
}

impl Add<&BitVector> for &BitVector {
    type Output = BitVector;

    fn add(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

/// A `rows × cols` matrix over GF(2), stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged bit matrix");
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "ragged bit matrix");
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in c.support() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_u8_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| BitVector::from_u8s(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_bits((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_rows(self.rows, self.columns())
    }

    pub fn diagonal(&self) -> BitVector {
        let n = self.rows.min(self.cols);
        BitVector::from_bits((0..n).map(|i| self.get(i, i)).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        BitVector::from_bits(self.data.iter().map(|r| r.dot(v)).collect())
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let cols: Vec<BitVector> = other.columns().iter().map(|c| self.mul_vec(c)).collect();
        BitMatrix::from_columns(self.rows, &cols)
    }

    /// The square submatrix on the given row/column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        let data = rows
            .iter()
            .map(|&i| BitVector::from_bits(cols.iter().map(|&j| self.get(i, j)).collect()))
            .collect();
        BitMatrix::from_rows(cols.len(), data)
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self).pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Solves `self · x = rhs`.
    ///
    /// Pivots are taken left to right and free variables are set to zero, so
    /// the returned solution is the least one when solutions are compared as
    /// binary numbers with coordinate 0 as the low bit.
    pub fn solve(&self, rhs: &BitVector) -> Option<BitVector> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let ech = Echelon::with_rhs(self, rhs);
        ech.solution()
    }

    /// A basis of the null space, one vector per free column (in column order).
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        Echelon::new(self).kernel_basis()
    }

    /// The column space, as a basis drawn from the columns themselves.
    pub fn column_basis(&self) -> Vec<BitVector> {
        let ech = Echelon::new(self);
        ech.pivots.iter().map(|&(_, j)| self.column(j)).collect()
    }

    pub fn in_column_space(&self, v: &BitVector) -> bool {
        self.solve(v).is_some()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.data.iter().map(|r| r.to_string()).collect();
        write!(f, "BitMatrix[{}]", rows.join(","))
    }
}

/// Reduced row echelon form, optionally augmented by a right-hand side.
struct Echelon {
    rref: Vec<BitVector>,
    rhs: Vec<bool>,
    cols: usize,
    /// `(row, column)` of each pivot, columns increasing.
    pivots: Vec<(usize, usize)>,
}

impl Echelon {
    fn new(m: &BitMatrix) -> Self {
        Self::with_rhs(m, &BitVector::zeros(m.rows))
    }

    fn with_rhs(m: &BitMatrix, rhs: &BitVector) -> Self {
        let mut rref = m.data.clone();
        let mut b: Vec<bool> = rhs.bits().to_vec();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            let Some(p) = (row..m.rows).find(|&i| rref[i].get(col)) else {
                continue;
            };
            rref.swap(row, p);
            b.swap(row, p);
            let pivot_row = rref[row].clone();
            let pivot_b = b[row];
            for i in 0..m.rows {
                if i != row && rref[i].get(col) {
                    rref[i] += &pivot_row;
                    b[i] ^= pivot_b;
                }
            }
            pivots.push((row, col));
            row += 1;
            if row == m.rows {
                break;
            }
        }
        Echelon {
            rref,
            rhs: b,
            cols: m.cols,
            pivots,
        }
    }

    fn solution(&self) -> Option<BitVector> {
        let rank = self.pivots.len();
        if self.rhs[rank..].iter().any(|&b| b) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for &(r, c) in &self.pivots {
            x.set(c, self.rhs[r]);
        }
        Some(x)
    }

    fn kernel_basis(&self) -> Vec<BitVector> {
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|&(_, c)| c).collect();
        (0..self.cols)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = BitVector::unit(self.cols, free);
                for &(r, c) in &self.pivots {
                    if self.rref[r].get(free) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_picks_low_solution() {
        let a = BitMatrix::from_u8_rows(&[&[1, 1], &[1, 1]]);
        let d = a.solve(&a.diagonal()).unwrap();
        assert_eq!(d, BitVector::from_u8s(&[1, 0]));
    }

    #[test]
    fn inconsistent_system() {
        let a = BitMatrix::from_u8_rows(&[&[1, 0], &[1, 0]]);
        assert!(a.solve(&BitVector::from_u8s(&[1, 0])).is_none());
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let a = BitMatrix::from_u8_rows(&[&[1, 1, 0, 1], &[0, 1, 1, 1], &[1, 0, 1, 0]]);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 4 - a.rank());
        for k in &ker {
            assert!(a.mul_vec(k).is_zero());
        }
    }

    #[test]
    fn index_round_trip() {
        for i in 0..32 {
            assert_eq!(BitVector::from_index(5, i).to_index(), i);
        }
        assert_eq!("0110".parse::<BitVector>().unwrap().to_index(), 0b0110);
    }

    #[test]
    fn empty_matrices() {
        let a = BitMatrix::zeros(0, 0);
        assert_eq!(a.solve(&BitVector::zeros(0)), Some(BitVector::zeros(0)));
        assert!(a.is_invertible());
    }
}
