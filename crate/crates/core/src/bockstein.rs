//! Mod-`n` cohomology of a pair of integral groups `(A, B) = (H^k, H^{k+1})`.
//!
//! The universal-coefficient sequence splits (non-canonically) as
//! `H^k(Z/n) ≅ (A ⊗ Z/n) ⊕ B[n]`, and with `Q/Z` coefficients as
//! `H^k(Q/Z) ≅ (A ⊗ Q/Z) ⊕ TB`. This module fixes the generator-aligned
//! splitting and realises the reduction `ρ_n`, the Bockstein `β^{Z/n}`,
//! the coefficient map `ι_n` and `β^{Q/Z}` as explicit maps on coordinates.
//! There is no ring structure here: mod-`n` products are not determined by
//! `(A, B)`.

use num_integer::Integer;
use thiserror::Error;

use crate::abelian::FgAbelianGroup;
use crate::linking::QmodZ;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BocksteinError {
    #[error("coefficient modulus must be at least 2, got {0}")]
    Modulus(i64),
    #[error("reduction needs an even source modulus and target modulus 2, got {source_n} -> {target_n}")]
    NotReducible { source_n: i64, target_n: i64 },
    #[error("source and target are built on different integral groups")]
    MismatchedGroups,
}

/// An element of `C_n = (A ⊗ Z/n) ⊕ B[n]`.
///
/// `tensor[i]` is the coefficient of `aᵢ ⊗ 1`; `torsion[j]` is the coordinate
/// along the generator `(d_j / g_j)·b_j` of `B[n]`, where `g_j = gcd(d_j, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModNElement {
    pub tensor: Vec<i64>,
    pub torsion: Vec<i64>,
}

/// An element of `C_∞ = (A ⊗ Q/Z) ⊕ TB`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QZElement {
    /// One `Q/Z` coordinate per free generator of `A`.
    pub free: Vec<QmodZ>,
    /// Coordinates in the torsion subgroup of `B`.
    pub torsion: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModNModel {
    n: i64,
    a: FgAbelianGroup,
    b: FgAbelianGroup,
    tensor_orders: Vec<i64>,
    torsion_orders: Vec<i64>,
}

impl ModNModel {
    pub fn new(a: FgAbelianGroup, b: FgAbelianGroup, n: i64) -> Result<Self, BocksteinError> {
        if n < 2 {
            return Err(BocksteinError::Modulus(n));
        }
        let tensor_orders = (0..a.ngens())
            .map(|i| a.generator_order(i).map_or(n, |d| d.gcd(&n)))
            .collect();
        let torsion_orders = b.invariant_factors().iter().map(|d| d.gcd(&n)).collect();
        Ok(ModNModel {
            n,
            a,
            b,
            tensor_orders,
            torsion_orders,
        })
    }

    pub fn modulus(&self) -> i64 {
        self.n
    }

    pub fn a(&self) -> &FgAbelianGroup {
        &self.a
    }

    pub fn b(&self) -> &FgAbelianGroup {
        &self.b
    }

    /// Orders of the cyclic summands of `A ⊗ Z/n`, one per generator of `A` (1 allowed).
    pub fn tensor_orders(&self) -> &[i64] {
        &self.tensor_orders
    }

    /// Orders of the cyclic summands of `B[n]`, one per torsion generator of `B`.
    pub fn torsion_orders(&self) -> &[i64] {
        &self.torsion_orders
    }

    /// `|C_n|`.
    pub fn carrier_order(&self) -> u64 {
        self.tensor_orders
            .iter()
            .chain(&self.torsion_orders)
            .map(|&o| o as u64)
            .product()
    }

    /// The carrier `C_n` as an abstract group in normal form.
    pub fn carrier_group(&self) -> FgAbelianGroup {
        let orders: Vec<i64> = self.tensor_orders.iter().chain(&self.torsion_orders).copied().collect();
        FgAbelianGroup::from_cyclic_orders(&orders).expect("small cyclic orders")
    }

    pub fn zero(&self) -> ModNElement {
        ModNElement {
            tensor: vec![0; self.tensor_orders.len()],
            torsion: vec![0; self.torsion_orders.len()],
        }
    }

    pub fn normalize(&self, x: &ModNElement) -> ModNElement {
        ModNElement {
            tensor: x.tensor.iter().zip(&self.tensor_orders).map(|(c, o)| c.mod_floor(o)).collect(),
            torsion: x.torsion.iter().zip(&self.torsion_orders).map(|(c, o)| c.mod_floor(o)).collect(),
        }
    }

    pub fn add(&self, x: &ModNElement, y: &ModNElement) -> ModNElement {
        self.normalize(&ModNElement {
            tensor: x.tensor.iter().zip(&y.tensor).map(|(a, b)| a + b).collect(),
            torsion: x.torsion.iter().zip(&y.torsion).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: i64, x: &ModNElement) -> ModNElement {
        self.normalize(&ModNElement {
            tensor: x.tensor.iter().map(|c| k * c).collect(),
            torsion: x.torsion.iter().map(|c| k * c).collect(),
        })
    }

    /// Every element of `C_n`, first tensor coordinate varying fastest.
    pub fn elements(&self) -> impl Iterator<Item = ModNElement> + '_ {
        let orders: Vec<i64> = self.tensor_orders.iter().chain(&self.torsion_orders).copied().collect();
        let split = self.tensor_orders.len();
        (0..self.carrier_order()).map(move |mut idx| {
            let mut coords = Vec::with_capacity(orders.len());
            for &o in &orders {
                coords.push((idx % o as u64) as i64);
                idx /= o as u64;
            }
            let torsion = coords.split_off(split);
            ModNElement {
                tensor: coords,
                torsion,
            }
        })
    }

    /// `ρ_n : A → C_n`, inclusion of `A ⊗ Z/n` after reducing.
    pub fn rho(&self, a: &[i64]) -> ModNElement {
        assert_eq!(a.len(), self.a.ngens(), "element not in A");
        self.normalize(&ModNElement {
            tensor: a.to_vec(),
            torsion: vec![0; self.torsion_orders.len()],
        })
    }

    /// `β^{Z/n} : C_n → B`, projection to `B[n]` followed by inclusion.
    pub fn beta(&self, x: &ModNElement) -> Vec<i64> {
        let mut out = self.b.zero();
        for (j, (&d, &g)) in self.b.invariant_factors().iter().zip(&self.torsion_orders).enumerate() {
            out[j] = x.torsion[j] * (d / g);
        }
        self.b.normalize(&out)
    }

    /// The element of `B[n]` (in carrier coordinates) mapping to `b` under
    /// [`ModNModel::beta`], or `None` when `n·b ≠ 0`.
    pub fn beta_preimage_in_torsion(&self, b: &[i64]) -> Option<ModNElement> {
        self.b.check_element(b).ok()?;
        if !self.b.is_zero(&self.b.scale(self.n, b)) {
            return None;
        }
        let torsion = self
            .b
            .invariant_factors()
            .iter()
            .zip(&self.torsion_orders)
            .zip(b)
            .map(|((&d, &g), &c)| c / (d / g))
            .collect();
        Some(ModNElement {
            tensor: vec![0; self.tensor_orders.len()],
            torsion,
        })
    }

    /// `ι_n : C_n → C_∞`: `c/n` on free tensor coordinates, torsion tensor
    /// coordinates die in `A ⊗ Q/Z`, and `B[n] ⊆ TB`.
    pub fn iota(&self, x: &ModNElement) -> QZElement {
        let t = self.a.torsion_rank();
        let free = x.tensor[t..].iter().map(|&c| QmodZ::from_residue(c, self.n)).collect();
        let torsion = self.beta(x)[..self.b.torsion_rank()].to_vec();
        QZElement { free, torsion }
    }

    /// `β^{Q/Z} : C_∞ → B`, zero on `A ⊗ Q/Z` and the inclusion on `TB`.
    pub fn beta_qz(&self, y: &QZElement) -> Vec<i64> {
        let mut out = self.b.zero();
        out[..y.torsion.len()].copy_from_slice(&y.torsion);
        self.b.normalize(&out)
    }

    /// Coefficient reduction `ρ₂ : C_{2k} → C_2` between models on the same `(A, B)`.
    pub fn coeff_reduce(&self, target: &ModNModel) -> Result<CoeffReduction, BocksteinError> {
        if self.n % 2 != 0 || target.n != 2 {
            return Err(BocksteinError::NotReducible {
                source_n: self.n,
                target_n: target.n,
            });
        }
        if self.a != target.a || self.b != target.b {
            return Err(BocksteinError::MismatchedGroups);
        }
        Ok(CoeffReduction {
            source: self.clone(),
            target: target.clone(),
            k: self.n / 2,
        })
    }
}

/// The reduction `C_{2k} → C_2`: the natural surjection on `A ⊗ Z/2k` and
/// multiplication by `k` on `B[2k] → B[2]`, so that `β^{Z/2} ∘ ρ₂ = k·β^{Z/2k}`.
#[derive(Debug, Clone)]
pub struct CoeffReduction {
    source: ModNModel,
    target: ModNModel,
    k: i64,
}

impl CoeffReduction {
    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn source(&self) -> &ModNModel {
        &self.source
    }

    pub fn target(&self) -> &ModNModel {
        &self.target
    }

    pub fn apply(&self, x: &ModNElement) -> ModNElement {
        let tensor = x.tensor.clone();
        let b = self.source.b();
        // multiply the B[2k] class by k inside B, then read off B[2] coordinates
        let scaled = b.scale(self.k, &self.source.beta(x));
        let torsion = b
            .invariant_factors()
            .iter()
            .zip(&self.target.torsion_orders)
            .zip(&scaled)
            .map(|((&d, &g), &c)| c / (d / g))
            .collect();
        self.target.normalize(&ModNElement { tensor, torsion })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[i64], r: usize) -> FgAbelianGroup {
        FgAbelianGroup::new(f.to_vec(), r).unwrap()
    }

    #[test]
    fn pure_torsion_case() {
        let m = ModNModel::new(FgAbelianGroup::trivial(), FgAbelianGroup::cyclic(2), 2).unwrap();
        assert_eq!(m.carrier_order(), 2);
        let gen = ModNElement { tensor: vec![], torsion: vec![1] };
        assert_eq!(m.beta(&gen), vec![1]);
    }

    #[test]
    fn free_a_lifts() {
        let m = ModNModel::new(FgAbelianGroup::free(1), FgAbelianGroup::trivial(), 3).unwrap();
        assert_eq!(m.carrier_order(), 3);
        for x in m.elements() {
            assert!(m.beta(&x).is_empty());
            assert_eq!(m.rho(&x.tensor), x);
        }
    }

    #[test]
    fn z4_z4_mod_2() {
        let m = ModNModel::new(FgAbelianGroup::cyclic(4), FgAbelianGroup::cyclic(4), 2).unwrap();
        assert_eq!(m.carrier_group(), g(&[2, 2], 0));
        let first = ModNElement { tensor: vec![1], torsion: vec![0] };
        let second = ModNElement { tensor: vec![0], torsion: vec![1] };
        assert_eq!(m.beta(&first), vec![0]);
        assert_eq!(m.beta(&second), vec![2]);
    }

    #[test]
    fn modulus_checked() {
        assert_eq!(
            ModNModel::new(FgAbelianGroup::trivial(), FgAbelianGroup::trivial(), 1),
            Err(BocksteinError::Modulus(1))
        );
    }

    #[test]
    fn reduction_mod_4_to_2() {
        let b = FgAbelianGroup::cyclic(4);
        let src = ModNModel::new(FgAbelianGroup::trivial(), b.clone(), 4).unwrap();
        let tgt = ModNModel::new(FgAbelianGroup::trivial(), b.clone(), 2).unwrap();
        let red = src.coeff_reduce(&tgt).unwrap();
        let gen = ModNElement { tensor: vec![], torsion: vec![1] };
        // 2·(generator of B[4]) is the generator of B[2]
        assert_eq!(red.apply(&gen), ModNElement { tensor: vec![], torsion: vec![1] });
        for x in src.elements() {
            assert_eq!(tgt.beta(&red.apply(&x)), b.scale(2, &src.beta(&x)));
        }
    }

    #[test]
    fn reduction_identity_when_k_is_one() {
        let a = g(&[2, 4], 1);
        let b = g(&[2, 8], 0);
        let m = ModNModel::new(a, b, 2).unwrap();
        let red = m.coeff_reduce(&m).unwrap();
        for x in m.elements() {
            assert_eq!(red.apply(&x), x);
        }
    }

    #[test]
    fn reduction_preconditions() {
        let a = FgAbelianGroup::free(1);
        let m3 = ModNModel::new(a.clone(), FgAbelianGroup::trivial(), 3).unwrap();
        let m2 = ModNModel::new(a.clone(), FgAbelianGroup::trivial(), 2).unwrap();
        assert!(matches!(m3.coeff_reduce(&m2), Err(BocksteinError::NotReducible { .. })));
        let other = ModNModel::new(a, FgAbelianGroup::cyclic(2), 2).unwrap();
        let m4 = ModNModel::new(FgAbelianGroup::free(1), FgAbelianGroup::trivial(), 4).unwrap();
        assert_eq!(m4.coeff_reduce(&other).unwrap_err(), BocksteinError::MismatchedGroups);
    }

    #[test]
    fn free_reduction_kills_bocksteins() {
        let a = FgAbelianGroup::free(1);
        let src = ModNModel::new(a.clone(), FgAbelianGroup::trivial(), 6).unwrap();
        let tgt = ModNModel::new(a, FgAbelianGroup::trivial(), 2).unwrap();
        let red = src.coeff_reduce(&tgt).unwrap();
        let x = ModNElement { tensor: vec![5], torsion: vec![] };
        assert_eq!(red.apply(&x).tensor, vec![1]);
    }

    #[test]
    fn iota_free_coordinate() {
        let m = ModNModel::new(FgAbelianGroup::free(1), FgAbelianGroup::trivial(), 4).unwrap();
        let x = ModNElement { tensor: vec![3], torsion: vec![] };
        assert_eq!(m.iota(&x).free, vec![QmodZ::new(3, 4)]);
    }
}
