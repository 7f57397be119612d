//! Bilinear pairings of finite abelian groups into `Q/Z`.

use std::fmt;
use std::ops::{Add, AddAssign};

use num_integer::Integer;
use thiserror::Error;

use crate::abelian::{AbelianError, FgAbelianGroup, GroupHom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkingError {
    #[error("pairings are only defined on finite groups, got {0}")]
    NotTorsion(FgAbelianGroup),
    #[error("value table is {rows}x{cols}, groups need {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("value at ({row}, {col}) is not killed by the generator orders")]
    IllDefined { row: usize, col: usize },
    #[error("pairing is not perfect")]
    NotPerfect,
    #[error(transparent)]
    Group(#[from] AbelianError),
}

/// An element of `Q/Z`, stored as a reduced fraction `num/den` with `0 ≤ num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.mod_floor(&den);
        let g = num.gcd(&den);
        QmodZ {
            num: num / g,
            den: den / g,
        }
    }

    pub fn zero() -> Self {
        QmodZ { num: 0, den: 1 }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn mul_int(self, k: i64) -> Self {
        let k = k.mod_floor(&self.den);
        QmodZ::new(self.num * k, self.den)
    }

    /// `ι_n : Z/n → Q/Z`, `[c] ↦ c/n`.
    pub fn from_residue(c: i64, n: i64) -> Self {
        QmodZ::new(c, n)
    }
}

impl Add for QmodZ {
    type Output = QmodZ;

    fn add(self, rhs: QmodZ) -> QmodZ {
        let den = self.den.lcm(&rhs.den);
        QmodZ::new(self.num * (den / self.den) + rhs.num * (den / rhs.den), den)
    }
}

impl AddAssign for QmodZ {
    fn add_assign(&mut self, rhs: QmodZ) {
        *self = *self + rhs;
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A pairing `φ : left × right → Q/Z`, entry `(i, j)` being `φ(gᵢ, hⱼ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QZPairing {
    left: FgAbelianGroup,
    right: FgAbelianGroup,
    values: Vec<Vec<QmodZ>>,
}

/// Outcome of a perfectness test, with the kernels of both adjoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perfectness {
    pub perfect: bool,
    /// Generators of `ker(right → left^∧)`.
    pub right_kernel: Vec<Vec<i64>>,
    /// Generators of `ker(left → right^∧)`.
    pub left_kernel: Vec<Vec<i64>>,
}

impl QZPairing {
    pub fn new(
        left: FgAbelianGroup,
        right: FgAbelianGroup,
        values: Vec<Vec<QmodZ>>,
    ) -> Result<Self, LinkingError> {
        for g in [&left, &right] {
            if !g.is_finite() {
                return Err(LinkingError::NotTorsion(g.clone()));
            }
        }
        let shape_ok =
            values.len() == left.ngens() && values.iter().all(|r| r.len() == right.ngens());
        if !shape_ok {
            return Err(LinkingError::Shape {
                rows: values.len(),
                cols: values.first().map_or(0, |r| r.len()),
                expected_rows: left.ngens(),
                expected_cols: right.ngens(),
            });
        }
        for (i, row) in values.iter().enumerate() {
            let di = left.invariant_factors()[i];
            for (j, v) in row.iter().enumerate() {
                let ej = right.invariant_factors()[j];
                if !v.mul_int(di).is_zero() || !v.mul_int(ej).is_zero() {
                    return Err(LinkingError::IllDefined { row: i, col: j });
                }
            }
        }
        Ok(QZPairing {
            left,
            right,
            values,
        })
    }

    /// The pairing `(x, y) ↦ c·x·y/m` between two cyclic groups.
    pub fn cyclic(left_order: i64, right_order: i64, c: i64, m: i64) -> Result<Self, LinkingError> {
        let left = FgAbelianGroup::cyclic(left_order);
        let right = FgAbelianGroup::cyclic(right_order);
        let values = vec![vec![QmodZ::new(c, m); right.ngens()]; left.ngens()];
        QZPairing::new(left, right, values)
    }

    pub fn left(&self) -> &FgAbelianGroup {
        &self.left
    }

    pub fn right(&self) -> &FgAbelianGroup {
        &self.right
    }

    pub fn values(&self) -> &[Vec<QmodZ>] {
        &self.values
    }

    pub fn evaluate(&self, g: &[i64], h: &[i64]) -> QmodZ {
        let mut acc = QmodZ::zero();
        for (i, &gi) in g.iter().enumerate() {
            for (j, &hj) in h.iter().enumerate() {
                acc += self.values[i][j].mul_int(gi * hj);
            }
        }
        acc
    }

    /// `φ̂ : right → left^∧, h ↦ φ(·, h)`, with `left^∧` realised on the
    /// invariant factors of `left` (coordinate `i` is `dᵢ·φ(gᵢ, h)`).
    pub fn right_adjoint(&self) -> GroupHom {
        let matrix = self
            .left
            .invariant_factors()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                self.values[i]
                    .iter()
                    .map(|v| v.numerator() * (d / v.denominator()))
                    .collect()
            })
            .collect();
        GroupHom::new(self.right.clone(), self.left.clone(), matrix)
            .expect("adjoint of a well-defined pairing is a homomorphism")
    }

    /// `φ̂′ : left → right^∧, g ↦ φ(g, ·)`.
    pub fn left_adjoint(&self) -> GroupHom {
        let matrix = self
            .right
            .invariant_factors()
            .iter()
            .enumerate()
            .map(|(j, &e)| {
                (0..self.left.ngens())
                    .map(|i| {
                        let v = self.values[i][j];
                        v.numerator() * (e / v.denominator())
                    })
                    .collect()
            })
            .collect();
        GroupHom::new(self.left.clone(), self.right.clone(), matrix)
            .expect("adjoint of a well-defined pairing is a homomorphism")
    }

    /// Decides perfectness through the right adjoint: bijective iff the
    /// groups have equal order and the adjoint is injective.
    pub fn is_perfect(&self) -> Result<Perfectness, LinkingError> {
        let right_kernel = self.right_adjoint().kernel_generators()?;
        let left_kernel = self.left_adjoint().kernel_generators()?;
        let same_order = self.left.torsion_order()? == self.right.torsion_order()?;
        Ok(Perfectness {
            perfect: same_order && right_kernel.is_empty(),
            right_kernel,
            left_kernel,
        })
    }

    /// The same decision made through the left adjoint.
    pub fn is_perfect_via_left(&self) -> Result<bool, LinkingError> {
        let same_order = self.left.torsion_order()? == self.right.torsion_order()?;
        Ok(same_order && self.left_adjoint().is_injective()?)
    }

    /// Decides `h₁ = h₂` by comparing the functionals `φ(·, h₁)` and `φ(·, h₂)`.
    pub fn equal_by_pairing(&self, h1: &[i64], h2: &[i64]) -> Result<bool, LinkingError> {
        self.right.check_element(h1)?;
        self.right.check_element(h2)?;
        if !self.is_perfect()?.perfect {
            return Err(LinkingError::NotPerfect);
        }
        let equal = (0..self.left.ngens()).all(|i| {
            let g = self.left.generator(i);
            self.evaluate(&g, h1) == self.evaluate(&g, h2)
        });
        debug_assert_eq!(equal, h1 == h2, "perfect pairing failed to separate elements");
        Ok(equal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qmodz_arithmetic() {
        assert_eq!(QmodZ::new(3, 4) + QmodZ::new(1, 4), QmodZ::zero());
        assert_eq!(QmodZ::new(1, 2) + QmodZ::new(1, 3), QmodZ::new(5, 6));
        assert_eq!(QmodZ::new(-1, 4), QmodZ::new(3, 4));
        assert_eq!(QmodZ::new(2, 4).denominator(), 2);
        assert_eq!(QmodZ::new(1, 4).mul_int(6), QmodZ::new(1, 2));
    }

    #[test]
    fn standard_cyclic_pairing_is_perfect() {
        for n in 2..=12 {
            let phi = QZPairing::cyclic(n, n, 1, n).unwrap();
            let p = phi.is_perfect().unwrap();
            assert!(p.perfect, "Z/{n}");
            assert!(p.right_kernel.is_empty() && p.left_kernel.is_empty());
        }
    }

    #[test]
    fn zero_pairing_kernel_is_everything() {
        let g = FgAbelianGroup::new(vec![2, 4], 0).unwrap();
        let zero = vec![vec![QmodZ::zero(); 2]; 2];
        let phi = QZPairing::new(g.clone(), g, zero).unwrap();
        let p = phi.is_perfect().unwrap();
        assert!(!p.perfect);
        // kernel generators span all of Z/2 + Z/4
        let ker = phi.right_adjoint();
        assert!(ker.is_zero());
        assert!(!p.right_kernel.is_empty());
    }

    #[test]
    fn half_pairing_z2_z4() {
        let phi = QZPairing::cyclic(2, 4, 1, 2).unwrap();
        let p = phi.is_perfect().unwrap();
        assert!(!p.perfect);
        assert_eq!(p.right_kernel, vec![vec![2]]);
        assert!(!phi.is_perfect_via_left().unwrap());
    }

    #[test]
    fn ill_defined_values_rejected() {
        // Z/2 x Z/4 -> Q/Z with φ(1,1) = 1/4 is not killed by 2
        let err = QZPairing::cyclic(2, 4, 1, 4).unwrap_err();
        assert_eq!(err, LinkingError::IllDefined { row: 0, col: 0 });
    }

    #[test]
    fn infinite_groups_unsupported() {
        let err = QZPairing::new(FgAbelianGroup::free(1), FgAbelianGroup::trivial(), vec![vec![]]);
        assert!(matches!(err, Err(LinkingError::NotTorsion(_))));
    }

    #[test]
    fn equality_by_pairing() {
        let phi = QZPairing::cyclic(4, 4, 1, 4).unwrap();
        assert!(phi.equal_by_pairing(&[0], &[0]).unwrap());
        assert!(!phi.equal_by_pairing(&[1], &[3]).unwrap());
        assert_eq!(phi.evaluate(&[1], &[1]), QmodZ::new(1, 4));
        assert_eq!(phi.evaluate(&[1], &[3]), QmodZ::new(3, 4));
        let phi2 = QZPairing::cyclic(2, 2, 1, 2).unwrap();
        assert!(phi2.equal_by_pairing(&[1], &[1]).unwrap());
        let bad = QZPairing::cyclic(2, 4, 1, 2).unwrap();
        assert_eq!(bad.equal_by_pairing(&[1], &[1]), Err(LinkingError::NotPerfect));
    }
}
