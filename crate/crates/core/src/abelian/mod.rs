//! Finitely generated abelian groups in invariant-factor normal form.
//!
//! A group `Z/d₁ ⊕ … ⊕ Z/d_k ⊕ Z^r` (with `d₁ | d₂ | … | d_k`, every `dᵢ ≥ 2`)
//! comes with an ordered generator basis: the torsion generators first, then
//! the free ones. Elements are coordinate vectors in that basis, torsion
//! coordinates reduced into `0..dᵢ`.

pub mod snf;

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::linking::{QZPairing, QmodZ};
use snf::{integer_kernel, smith_normal_form, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("invariant factors {0:?} are not a divisibility chain of integers >= 2")]
    InvalidFactors(Vec<i64>),
    #[error("malformed element {element:?}: {reason}")]
    MalformedElement { element: Vec<i64>, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix column {column} does not respect the order of its generator")]
    NotAHomomorphism { column: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

/// Order of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    invariant_factors: Vec<i64>,
    free_rank: usize,
}

impl FgAbelianGroup {
    pub fn new(invariant_factors: Vec<i64>, free_rank: usize) -> Result<Self, AbelianError> {
        let chain_ok = invariant_factors.iter().all(|&d| d >= 2)
            && invariant_factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain_ok {
            return Err(AbelianError::InvalidFactors(invariant_factors));
        }
        Ok(FgAbelianGroup {
            invariant_factors,
            free_rank,
        })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            invariant_factors: vec![],
            free_rank: 0,
        }
    }

    pub fn cyclic(order: i64) -> Self {
        if order == 1 {
            return Self::trivial();
        }
        Self::new(vec![order], 0).expect("cyclic order must be >= 1")
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            invariant_factors: vec![],
            free_rank: rank,
        }
    }

    /// Normal form of `Z/o₁ ⊕ … ⊕ Z/o_m`, where an order of 0 stands for `Z`.
    pub fn from_cyclic_orders(orders: &[i64]) -> Result<Self, AbelianError> {
        let relations: IntMatrix = orders
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(i, &o)| {
                let mut row = vec![0; orders.len()];
                row[i] = o;
                row
            })
            .collect();
        group_from_relations(&relations, orders.len()).map(|(g, _)| g)
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn ngens(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    /// Order of generator `i`, or `None` for a free generator.
    pub fn generator_order(&self, i: usize) -> Option<i64> {
        self.invariant_factors.get(i).copied()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    /// `|TG|`, the order of the torsion subgroup.
    pub fn torsion_order(&self) -> Result<u64, AbelianError> {
        self.invariant_factors.iter().try_fold(1u64, |acc, &d| {
            acc.checked_mul(d as u64).ok_or(AbelianError::Overflow)
        })
    }

    pub fn order(&self) -> Option<u64> {
        if self.is_finite() {
            self.torsion_order().ok()
        } else {
            None
        }
    }

    /// Exponent of the torsion subgroup (1 when it is trivial).
    pub fn torsion_exponent(&self) -> i64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.ngens()]
    }

    pub fn generator(&self, i: usize) -> Vec<i64> {
        let mut g = self.zero();
        g[i] = 1;
        g
    }

    /// Checks that `g` is a coordinate vector in normal form.
    pub fn check_element(&self, g: &[i64]) -> Result<(), AbelianError> {
        if g.len() != self.ngens() {
            return Err(AbelianError::MalformedElement {
                element: g.to_vec(),
                reason: format!("expected {} coordinates", self.ngens()),
            });
        }
        for (i, &d) in self.invariant_factors.iter().enumerate() {
            if !(0..d).contains(&g[i]) {
                return Err(AbelianError::MalformedElement {
                    element: g.to_vec(),
                    reason: format!("coordinate {i} outside 0..{d}"),
                });
            }
        }
        Ok(())
    }

    /// Reduces torsion coordinates into their canonical range.
    pub fn normalize(&self, g: &[i64]) -> Vec<i64> {
        assert_eq!(g.len(), self.ngens(), "element has wrong number of coordinates");
        g.iter()
            .enumerate()
            .map(|(i, &c)| match self.generator_order(i) {
                Some(d) => c.mod_floor(&d),
                None => c,
            })
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&sum)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        self.normalize(&neg)
    }

    pub fn scale(&self, n: i64, a: &[i64]) -> Vec<i64> {
        let scaled: Vec<i64> = a
            .iter()
            .enumerate()
            .map(|(i, &x)| match self.generator_order(i) {
                // reduce first so the product stays in range
                Some(d) => (n.mod_floor(&d) * x.mod_floor(&d)).mod_floor(&d),
                None => n * x,
            })
            .collect();
        self.normalize(&scaled)
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        self.normalize(a).iter().all(|&c| c == 0)
    }

    /// Least `n ≥ 1` with `n·g = 0`, or [`Order::Infinite`].
    pub fn element_order(&self, g: &[i64]) -> Result<Order, AbelianError> {
        self.check_element(g)?;
        if g[self.torsion_rank()..].iter().any(|&c| c != 0) {
            return Ok(Order::Infinite);
        }
        let order = self
            .invariant_factors
            .iter()
            .zip(g)
            .fold(1i64, |acc, (&d, &c)| acc.lcm(&(d / c.gcd(&d))));
        Ok(Order::Finite(order as u64))
    }

    /// All elements of the torsion subgroup, free coordinates zero.
    ///
    /// The first coordinate varies fastest.
    pub fn torsion_elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let total = self.torsion_order().expect("torsion subgroup too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut g = self.zero();
            for (i, &d) in self.invariant_factors.iter().enumerate() {
                g[i] = (idx % d as u64) as i64;
                idx /= d as u64;
            }
            g
        })
    }

    /// Elements of `G[n] = {g : n·g = 0}`.
    pub fn n_torsion_elements(&self, n: i64) -> impl Iterator<Item = Vec<i64>> + '_ {
        self.torsion_elements().filter(move |g| self.is_zero(&self.scale(n, g)))
    }

    /// The torsion subgroup, the `n`-torsion subgroup and the torsion dual.
    pub fn torsion_structure(&self, n: i64) -> TorsionStructure {
        assert!(n >= 1, "n must be positive");
        let torsion = FgAbelianGroup::new(self.invariant_factors.clone(), 0)
            .expect("factors already normalized");
        let mut incl = vec![vec![0; torsion.ngens()]; self.ngens()];
        for (i, row) in incl.iter_mut().enumerate().take(torsion.ngens()) {
            row[i] = 1;
        }
        let torsion_inclusion = GroupHom::new(torsion.clone(), self.clone(), incl)
            .expect("torsion inclusion is a homomorphism");

        // G[n] is generated by (d/g)·eᵢ of order g = gcd(d, n), over factors with g > 1
        let kept: Vec<(usize, i64, i64)> = self
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, d, d.gcd(&n)))
            .filter(|&(_, _, g)| g > 1)
            .collect();
        let n_torsion = FgAbelianGroup::new(kept.iter().map(|&(_, _, g)| g).collect(), 0)
            .expect("gcds of a divisibility chain form a chain");
        let mut incl = vec![vec![0; kept.len()]; self.ngens()];
        for (k, &(i, d, g)) in kept.iter().enumerate() {
            incl[i][k] = d / g;
        }
        let n_torsion_inclusion = GroupHom::new(n_torsion.clone(), self.clone(), incl)
            .expect("n-torsion inclusion is a homomorphism");

        let dual = torsion.clone();
        let values = (0..torsion.ngens())
            .map(|i| {
                (0..dual.ngens())
                    .map(|j| {
                        if i == j {
                            QmodZ::new(1, torsion.invariant_factors[i])
                        } else {
                            QmodZ::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let evaluation = QZPairing::new(torsion.clone(), dual.clone(), values)
            .expect("evaluation pairing is well defined");

        TorsionStructure {
            torsion,
            torsion_inclusion,
            n_torsion,
            n_torsion_inclusion,
            dual,
            evaluation,
        }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone)]
pub struct TorsionStructure {
    pub torsion: FgAbelianGroup,
    pub torsion_inclusion: GroupHom,
    pub n_torsion: FgAbelianGroup,
    pub n_torsion_inclusion: GroupHom,
    /// `TG^∧ = Hom(TG, Q/Z)`, realised on the same invariant factors.
    pub dual: FgAbelianGroup,
    /// The evaluation pairing `TG × TG^∧ → Q/Z`.
    pub evaluation: QZPairing,
}

/// A homomorphism given by its action on generators: column `j` of `matrix`
/// is the image of domain generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    domain: FgAbelianGroup,
    codomain: FgAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// `matrix` has one row per codomain generator and one column per domain
    /// generator. Columns are normalized; a column for a generator of order
    /// `d` must be killed by `d`.
    pub fn new(
        domain: FgAbelianGroup,
        codomain: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AbelianError> {
        if matrix.len() != codomain.ngens() {
            return Err(AbelianError::DimensionMismatch {
                expected: codomain.ngens(),
                found: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != domain.ngens()) {
            return Err(AbelianError::DimensionMismatch {
                expected: domain.ngens(),
                found: row.len(),
            });
        }
        let mut hom = GroupHom {
            domain,
            codomain,
            matrix,
        };
        for j in 0..hom.domain.ngens() {
            let col = hom.codomain.normalize(&hom.column(j));
            if let Some(d) = hom.domain.generator_order(j) {
                if !hom.codomain.is_zero(&hom.codomain.scale(d, &col)) {
                    return Err(AbelianError::NotAHomomorphism { column: j });
                }
            }
            for (i, &c) in col.iter().enumerate() {
                hom.matrix[i][j] = c;
            }
        }
        Ok(hom)
    }

    pub fn zero(domain: FgAbelianGroup, codomain: FgAbelianGroup) -> Self {
        let matrix = vec![vec![0; domain.ngens()]; codomain.ngens()];
        GroupHom {
            domain,
            codomain,
            matrix,
        }
    }

    pub fn domain(&self) -> &FgAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|row| row[j]).collect()
    }

    pub fn apply(&self, g: &[i64]) -> Vec<i64> {
        assert_eq!(g.len(), self.domain.ngens(), "element not in the domain");
        let raw: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(g).map(|(a, b)| a * b).sum())
            .collect();
        self.codomain.normalize(&raw)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, AbelianError> {
        if other.domain != self.codomain {
            return Err(AbelianError::DimensionMismatch {
                expected: self.codomain.ngens(),
                found: other.domain.ngens(),
            });
        }
        let cols: Vec<Vec<i64>> = (0..self.domain.ngens())
            .map(|j| other.apply(&self.column(j)))
            .collect();
        let matrix = (0..other.codomain.ngens())
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        GroupHom::new(self.domain.clone(), other.codomain.clone(), matrix)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&c| c == 0)
    }

    /// Generators of the kernel, reduced into normal form, zeros dropped.
    pub fn kernel_generators(&self) -> Result<Vec<Vec<i64>>, AbelianError> {
        // x ∈ ker iff M·x lies in the codomain relation lattice: solve [M | -D] (x, y) = 0
        let m = self.domain.ngens();
        let k = self.codomain.ngens();
        let system: IntMatrix = (0..k)
            .map(|i| {
                let mut row = self.matrix[i].clone();
                row.extend((0..k).map(|l| {
                    if l == i {
                        -self.codomain.generator_order(i).unwrap_or(0)
                    } else {
                        0
                    }
                }));
                row
            })
            .collect();
        let basis = integer_kernel(&system, m + k)?;
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for v in basis {
            let g = self.domain.normalize(&v[..m]);
            if !self.domain.is_zero(&g) && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(gens)
    }

    pub fn is_injective(&self) -> Result<bool, AbelianError> {
        Ok(self.kernel_generators()?.is_empty())
    }
}

/// Cokernel of the relation lattice spanned by the rows of `relations`.
///
/// Returns the group in invariant-factor form (factors ascending, free
/// generators last) together with the projection from `Z^n_generators`.
pub fn group_from_relations(
    relations: &[Vec<i64>],
    n_generators: usize,
) -> Result<(FgAbelianGroup, GroupHom), AbelianError> {
    let snf = smith_normal_form(&relations.to_vec(), n_generators)?;
    // new coordinates y = x·V; y_j lives in Z/d_j (d_j = 0 means Z)
    let d: Vec<i64> = (0..n_generators)
        .map(|j| snf.diagonal.get(j).copied().unwrap_or(0))
        .collect();
    let kept: Vec<usize> = (0..n_generators).filter(|&j| d[j] != 1).collect();
    let torsion: Vec<i64> = kept.iter().map(|&j| d[j]).filter(|&x| x != 0).collect();
    let free_rank = kept.len() - torsion.len();
    let group = FgAbelianGroup::new(torsion, free_rank)?;
    let matrix: IntMatrix = kept
        .iter()
        .map(|&j| (0..n_generators).map(|i| snf.right[i][j]).collect())
        .collect();
    let projection = GroupHom::new(FgAbelianGroup::free(n_generators), group.clone(), matrix)?;
    Ok((group, projection))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(f: &[i64], r: usize) -> FgAbelianGroup {
        FgAbelianGroup::new(f.to_vec(), r).unwrap()
    }

    #[test]
    fn empty_presentation_is_trivial() {
        let (g, proj) = group_from_relations(&[], 0).unwrap();
        assert!(g.is_trivial());
        assert_eq!(proj.domain().ngens(), 0);
    }

    #[test]
    fn abelianized_semidirect_presentation() {
        // a = a^5, a^8, b^2 on generators (a, b)
        let rels = vec![vec![4, 0], vec![8, 0], vec![0, 2]];
        let (g, proj) = group_from_relations(&rels, 2).unwrap();
        assert_eq!(g, group(&[2, 4], 0));
        let a = proj.apply(&[1, 0]);
        assert_eq!(g.element_order(&a).unwrap(), Order::Finite(4));
        let b = proj.apply(&[0, 1]);
        assert_eq!(g.element_order(&b).unwrap(), Order::Finite(2));
    }

    #[test]
    fn determinant_three_lattice() {
        let (g, _) = group_from_relations(&[vec![2, 1], vec![1, 2]], 2).unwrap();
        assert_eq!(g, FgAbelianGroup::cyclic(3));
    }

    #[test]
    fn free_part_survives() {
        let (g, proj) = group_from_relations(&[vec![2, 4, 0]], 3).unwrap();
        assert_eq!(g, group(&[2], 2));
        // relation maps to zero
        assert!(g.is_zero(&proj.apply(&[2, 4, 0])));
    }

    #[test]
    fn orders() {
        assert_eq!(group(&[], 1).element_order(&[1]).unwrap(), Order::Infinite);
        assert_eq!(group(&[2, 4], 0).element_order(&[1, 1]).unwrap(), Order::Finite(4));
        assert_eq!(FgAbelianGroup::cyclic(8).element_order(&[4]).unwrap(), Order::Finite(2));
        assert_eq!(group(&[2, 4], 0).element_order(&[0, 0]).unwrap(), Order::Finite(1));
    }

    #[test]
    fn malformed_elements() {
        let g = group(&[4], 1);
        assert!(matches!(
            g.element_order(&[4, 0]),
            Err(AbelianError::MalformedElement { .. })
        ));
        assert!(matches!(
            g.element_order(&[1]),
            Err(AbelianError::MalformedElement { .. })
        ));
    }

    #[test]
    fn invalid_factor_chain() {
        assert!(FgAbelianGroup::new(vec![4, 2], 0).is_err());
        assert!(FgAbelianGroup::new(vec![1], 0).is_err());
    }

    #[test]
    fn two_torsion_of_z_plus_z4() {
        let g = group(&[4], 1);
        let ts = g.torsion_structure(2);
        assert_eq!(ts.n_torsion, FgAbelianGroup::cyclic(2));
        assert_eq!(ts.n_torsion_inclusion.apply(&[1]), vec![2, 0]);
        assert_eq!(ts.torsion, FgAbelianGroup::cyclic(4));
    }

    #[test]
    fn free_group_has_trivial_torsion() {
        let ts = FgAbelianGroup::free(3).torsion_structure(5);
        assert!(ts.torsion.is_trivial());
        assert!(ts.dual.is_trivial());
        assert!(ts.n_torsion.is_trivial());
    }

    #[test]
    fn dual_of_c4_c2() {
        let g = group(&[2, 4], 0);
        let ts = g.torsion_structure(1);
        assert_eq!(ts.dual, g);
        assert_eq!(ts.dual.torsion_order().unwrap(), ts.torsion.torsion_order().unwrap());
        assert!(ts.evaluation.is_perfect().unwrap().perfect);
    }

    #[test]
    fn hom_rejects_bad_columns() {
        // Z/2 -> Z/4 sending the generator to 1 is not well defined
        let err = GroupHom::new(FgAbelianGroup::cyclic(2), FgAbelianGroup::cyclic(4), vec![vec![1]]);
        assert_eq!(err.unwrap_err(), AbelianError::NotAHomomorphism { column: 0 });
        assert!(GroupHom::new(FgAbelianGroup::cyclic(2), FgAbelianGroup::cyclic(4), vec![vec![2]]).is_ok());
    }

    #[test]
    fn kernel_of_doubling_on_z4() {
        let z4 = FgAbelianGroup::cyclic(4);
        let double = GroupHom::new(z4.clone(), z4, vec![vec![2]]).unwrap();
        assert_eq!(double.kernel_generators().unwrap(), vec![vec![2]]);
    }

    #[test]
    fn from_cyclic_orders_normalizes() {
        let g = FgAbelianGroup::from_cyclic_orders(&[2, 3, 0, 1]).unwrap();
        assert_eq!(g, group(&[6], 1));
    }
}
