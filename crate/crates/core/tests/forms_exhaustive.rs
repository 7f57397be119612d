//! Symmetric forms over GF(2), checked against enumeration of all vectors.

use brauer_index::forms2::{Z2SymForm, Z2Trilinear};
use brauer_index::gf2::{BitMatrix, BitVector};

/// Every symmetric `n × n` matrix, from its upper triangle.
fn symmetric_matrices(n: usize) -> impl Iterator<Item = BitMatrix> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    (0u64..1 << slots.len()).map(move |mask| {
        let mut m = BitMatrix::zeros(n, n);
        for (b, &(i, j)) in slots.iter().enumerate() {
            if mask >> b & 1 == 1 {
                m.set(i, j, true);
                m.set(j, i, true);
            }
        }
        m
    })
}

#[test]
fn diagonal_solution_is_the_least_one() {
    for n in 0..=4 {
        for a in symmetric_matrices(n) {
            let form = Z2SymForm::new(a.clone()).unwrap();
            let d = form.solve_diagonal();
            let diag = a.diagonal();
            let least = BitVector::all(n).find(|v| a.mul_vec(v) == diag).expect("a solution exists");
            assert_eq!(d, least, "{a:?}");
        }
    }
}

#[test]
fn documented_solutions() {
    let f = Z2SymForm::new(BitMatrix::from_u8_rows(&[&[1, 1], &[1, 1]])).unwrap();
    assert_eq!(f.solve_diagonal(), BitVector::from_u8s(&[1, 0]));
    assert_eq!(Z2SymForm::identity(3).solve_diagonal(), BitVector::ones(3));
    assert_eq!(Z2SymForm::zero(3).solve_diagonal(), BitVector::zeros(3));
}

#[test]
fn zero_nonsingular_split_by_enumeration() {
    for n in 0..=4 {
        for a in symmetric_matrices(n) {
            let form = Z2SymForm::new(a.clone()).unwrap();
            let split = form.decompose_zero_nonsingular();
            // radical by enumeration
            let radical: Vec<BitVector> = BitVector::all(n).filter(|v| a.mul_vec(v).is_zero()).collect();
            assert_eq!(1usize << split.radical.len(), radical.len());
            assert!(split.nonsingular.is_nonsingular());
            assert!(split.change_of_basis.is_invertible());
            assert_eq!(split.nonsingular.dim() + split.radical.len(), n);
            // Pᵀ A P = 0 ⊕ nonsingular
            let t = form.change_basis(&split.change_of_basis);
            let z = Z2SymForm::zero(split.radical.len()).orthogonal_sum(&split.nonsingular);
            assert_eq!(t, z);
        }
    }
}

#[test]
fn trilinear_slices_match_evaluation() {
    // every symmetric tensor on GF(2)^2 (4 orbits), all x and basis {e0, e1}
    let orbits = [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1]];
    for mask in 0u32..16 {
        let chosen: Vec<[usize; 3]> = (0..4).filter(|b| mask >> b & 1 == 1).map(|b| orbits[b]).collect();
        let t = Z2Trilinear::from_triples(2, &chosen).unwrap();
        for x in BitVector::all(2) {
            let basis = [BitVector::unit(2, 0), BitVector::unit(2, 1)];
            let lambda = t.form_from_trilinear(&x, &basis).unwrap();
            for y in BitVector::all(2) {
                for z in BitVector::all(2) {
                    assert_eq!(lambda.eval(&y, &z), t.eval(&y, &x, &z));
                }
            }
        }
    }
}

#[test]
fn model_a_slice() {
    let t = Z2Trilinear::from_triples(2, &[[1, 1, 0], [1, 0, 0]]).unwrap();
    let lambda = t.form_from_trilinear(&BitVector::unit(2, 1), &[BitVector::unit(2, 0)]).unwrap();
    assert_eq!(lambda.matrix(), &BitMatrix::from_u8_rows(&[&[1]]));
}
