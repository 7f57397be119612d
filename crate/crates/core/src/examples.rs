//! Reference models and the small-model enumerator.
//!
//! The two reference models are synthetic: each agrees with everything that
//! is known about the degree-(2,3) cohomology of the corresponding Teichner
//! sphere bundle and realizes its period/index regime. Neither claims to be
//! the full cohomology of an actual manifold.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::abelian::FgAbelianGroup;
use crate::forms2::Z2Trilinear;
use crate::gf2::{BitMatrix, BitVector};
use crate::model6::{SixManifoldModel, ValidatedModel};

/// MODEL-A: the orientable case, spin^c, `per = 2`, `ind = 4`.
///
/// `H² = Z/4⟨s⟩`, `H³ = Z/2⟨α⟩`, `W = span{t, x}` with `ρ₂(s) = t`,
/// `β(x) = α`, `v₂ = 0`, `c₁ = 0`, and `T(x,x,t) = T(x,t,t) = 1`.
pub fn model_a_teichner_orientable() -> ValidatedModel {
    let t = Z2Trilinear::from_triples(2, &[[1, 1, 0], [1, 0, 0]]).expect("indices in range");
    SixManifoldModel::new(
        FgAbelianGroup::cyclic(4),
        FgAbelianGroup::cyclic(2),
        BitMatrix::from_u8_rows(&[&[1], &[0]]),
        vec![vec![0, 1]],
        t,
        BitVector::zeros(2),
        Some(vec![0]),
    )
    .and_then(SixManifoldModel::validated)
    .expect("MODEL-A is valid")
}

/// MODEL-B: the non-orientable-base case, not spin^c, `per = 2`, `ind = 8`.
///
/// `H² = Z/4⟨s⟩`, `H³ = Z/2⟨α⟩ ⊕ Z/2⟨α′⟩`, `W = span{t, x, v}` with
/// `ρ₂(s) = t`, `β(x) = α`, `β(v) = α′`, `v₂ = v`, no `c₁`, and
/// `T(x,x,t) = T(v,x,t) = 1`.
pub fn model_b_teichner_nonorientable() -> ValidatedModel {
    let t = Z2Trilinear::from_triples(3, &[[1, 1, 0], [2, 1, 0]]).expect("indices in range");
    SixManifoldModel::new(
        FgAbelianGroup::cyclic(4),
        FgAbelianGroup::new(vec![2, 2], 0).expect("valid factors"),
        BitMatrix::from_u8_rows(&[&[1], &[0], &[0]]),
        vec![vec![0, 1, 0], vec![0, 0, 1]],
        t,
        BitVector::unit(3, 2),
        None,
    )
    .and_then(SixManifoldModel::validated)
    .expect("MODEL-B is valid")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExamplesError {
    #[error("class has length {found}, degree {degree} has dimension {dim}")]
    DegreeMismatch { degree: u8, found: usize, dim: usize },
    #[error("product table is not symmetric at ({0}, {1})")]
    AsymmetricProduct(usize, usize),
    #[error("factor {0} is not an integer >= 2")]
    InvalidFactor(i64),
    #[error("max_dim_W = {max_dim_w} exceeds the limit of 4 (about {estimate} candidate models)")]
    TooLarge { max_dim_w: usize, estimate: u128 },
}

/// `H^{≤2}(M; Z/2)` of a 4-manifold, enough for low Stiefel–Whitney bookkeeping.
///
/// `products[i][j]` is the degree-2 class `aᵢ·aⱼ` of two degree-1 basis
/// classes. A degree-2 class `w` has vanishing Bockstein iff
/// `bockstein · w = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2RingSlice {
    dim1: usize,
    dim2: usize,
    products: Vec<Vec<BitVector>>,
    bockstein: BitMatrix,
}

impl Z2RingSlice {
    pub fn new(
        dim1: usize,
        dim2: usize,
        products: Vec<Vec<BitVector>>,
        bockstein: BitMatrix,
    ) -> Result<Self, ExamplesError> {
        if products.len() != dim1 || products.iter().any(|r| r.len() != dim1) {
            return Err(ExamplesError::DegreeMismatch {
                degree: 1,
                found: products.len(),
                dim: dim1,
            });
        }
        for row in &products {
            for p in row {
                check_len(2, p, dim2)?;
            }
        }
        for (i, row) in products.iter().enumerate() {
            for (j, p) in row.iter().enumerate().take(i) {
                if *p != products[j][i] {
                    return Err(ExamplesError::AsymmetricProduct(i, j));
                }
            }
        }
        if bockstein.cols() != dim2 {
            return Err(ExamplesError::DegreeMismatch {
                degree: 2,
                found: bockstein.cols(),
                dim: dim2,
            });
        }
        Ok(Z2RingSlice {
            dim1,
            dim2,
            products,
            bockstein,
        })
    }

    /// A slice with zero products in which every degree-2 class lifts.
    pub fn trivial(dim1: usize, dim2: usize) -> Self {
        Z2RingSlice {
            dim1,
            dim2,
            products: vec![vec![BitVector::zeros(dim2); dim1]; dim1],
            bockstein: BitMatrix::zeros(0, dim2),
        }
    }

    pub fn product(&self, a: &BitVector, b: &BitVector) -> Result<BitVector, ExamplesError> {
        check_len(1, a, self.dim1)?;
        check_len(1, b, self.dim1)?;
        let mut out = BitVector::zeros(self.dim2);
        for i in a.support() {
            for j in b.support() {
                out += &self.products[i][j];
            }
        }
        Ok(out)
    }

    pub fn bockstein_vanishes(&self, w: &BitVector) -> Result<bool, ExamplesError> {
        check_len(2, w, self.dim2)?;
        Ok(self.bockstein.mul_vec(w).is_zero())
    }
}

fn check_len(degree: u8, v: &BitVector, dim: usize) -> Result<(), ExamplesError> {
    if v.len() != dim {
        return Err(ExamplesError::DegreeMismatch {
            degree,
            found: v.len(),
            dim,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinCVerdict {
    SpinC,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereBundleClasses {
    pub w1: BitVector,
    pub w2: BitVector,
    pub verdict: SpinCVerdict,
}

/// Stiefel–Whitney classes of the sphere bundle `N = S(E) → M` of a rank-3
/// bundle, expressed in the base:
/// `w₁(N) = w₁(M) + w₁(E)` and `w₂(N) = w₂(M) + w₁(M)w₁(E) + w₂(E)`.
///
/// The verdict is `SpinC` when `w₁(M) = w₁(E)` and the Bockstein vanishes on
/// both `w₂(M)` and `w₂(E)`.
pub fn sphere_bundle_low_sw(
    ring: &Z2RingSlice,
    w1_m: &BitVector,
    w2_m: &BitVector,
    w1_e: &BitVector,
    w2_e: &BitVector,
) -> Result<SphereBundleClasses, ExamplesError> {
    check_len(2, w2_m, ring.dim2)?;
    check_len(2, w2_e, ring.dim2)?;
    let mixed = ring.product(w1_m, w1_e)?;
    let w1 = w1_m + w1_e;
    let w2 = &(w2_m + &mixed) + w2_e;
    let verdict = if w1_m == w1_e && ring.bockstein_vanishes(w2_m)? && ring.bockstein_vanishes(w2_e)? {
        SpinCVerdict::SpinC
    } else {
        SpinCVerdict::Unknown
    };
    Ok(SphereBundleClasses { w1, w2, verdict })
}

/// Torsion parts with at most two generators, factors from `allowed`.
fn torsion_shapes(allowed: &BTreeSet<i64>) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &a in allowed {
        out.push(vec![a]);
    }
    for &a in allowed {
        for &b in allowed {
            if a <= b && b % a == 0 {
                out.push(vec![a, b]);
            }
        }
    }
    out
}

fn even_count(factors: &[i64]) -> usize {
    factors.iter().filter(|d| *d % 2 == 0).count()
}

fn binomial3(n: u128) -> u128 {
    n.saturating_mul(n.saturating_sub(1))
        .saturating_mul(n.saturating_sub(2))
        / 6
}

/// Every valid model with `dim W ≤ max_dim_w` whose H² and H³ have at most
/// two torsion generators drawn from `allowed_factors`.
///
/// H² ranges over free rank 0 and 1, H³ is finite. Exactness pins `dim W`
/// to `dim im ρ₂ + dim H³[2]`, and `(ρ₂, β)` is taken in the normal form
/// where `W` lists reductions of the even-order and free H² generators
/// first, followed by a Bockstein section of the H³[2] basis. Every `v₂` and
/// every symmetric `T` is tried; `c₁` is the pinned lift of `v₂` when one
/// exists. The order is deterministic.
pub fn enumerate_valid_models(
    max_dim_w: usize,
    allowed_factors: &[i64],
) -> Result<impl Iterator<Item = ValidatedModel>, ExamplesError> {
    if let Some(&bad) = allowed_factors.iter().find(|&&d| d < 2) {
        return Err(ExamplesError::InvalidFactor(bad));
    }
    if max_dim_w > 4 {
        let d = max_dim_w as u128;
        let exponent = d.saturating_add(binomial3(d + 2));
        let estimate = u32::try_from(exponent)
            .ok()
            .and_then(|e| 2u128.checked_pow(e))
            .unwrap_or(u128::MAX);
        return Err(ExamplesError::TooLarge { max_dim_w, estimate });
    }
    let allowed: BTreeSet<i64> = allowed_factors.iter().copied().collect();
    let shapes = torsion_shapes(&allowed);
    let mut pairs = Vec::new();
    for h2 in &shapes {
        for free in 0..=1usize {
            for h3 in &shapes {
                let dim = even_count(h2) + free + even_count(h3);
                if dim <= max_dim_w {
                    pairs.push((
                        FgAbelianGroup::new(h2.clone(), free).expect("divisibility chain"),
                        FgAbelianGroup::new(h3.clone(), 0).expect("divisibility chain"),
                    ));
                }
            }
        }
    }
    Ok(pairs.into_iter().flat_map(|(h2, h3)| models_on(h2, h3)))
}

fn models_on(h2: FgAbelianGroup, h3: FgAbelianGroup) -> impl Iterator<Item = ValidatedModel> {
    let red_gens: Vec<usize> = (0..h2.ngens())
        .filter(|&j| h2.generator_order(j).is_none_or(|d| d % 2 == 0))
        .collect();
    let h3_even: Vec<usize> = (0..h3.torsion_rank())
        .filter(|&j| h3.invariant_factors()[j] % 2 == 0)
        .collect();
    let r = red_gens.len();
    let dim = r + h3_even.len();

    let mut red2 = BitMatrix::zeros(dim, h2.ngens());
    for (i, &j) in red_gens.iter().enumerate() {
        red2.set(i, j, true);
    }
    let mut bock = vec![vec![0i64; dim]; h3.ngens()];
    for (k, &j) in h3_even.iter().enumerate() {
        bock[j][r + k] = h3.invariant_factors()[j] / 2;
    }
    let orbits: Vec<[usize; 3]> = (0..dim)
        .flat_map(|i| (i..dim).flat_map(move |j| (j..dim).map(move |k| [i, j, k])))
        .collect();

    (0..1u64 << dim).flat_map(move |v2_index| {
        let v2 = BitVector::from_index(dim, v2_index);
        // v₂ lifts iff it has no Bockstein coordinates
        let c1 = (v2.support().all(|i| i < r)).then(|| {
            let mut e = h2.zero();
            for i in v2.support() {
                e[red_gens[i]] = 1;
            }
            e
        });
        let h2 = h2.clone();
        let h3 = h3.clone();
        let red2 = red2.clone();
        let bock = bock.clone();
        let orbits = orbits.clone();
        (0..1u64 << orbits.len()).filter_map(move |mask| {
            let chosen: Vec<[usize; 3]> = orbits
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, o)| *o)
                .collect();
            let t = Z2Trilinear::from_triples(dim, &chosen).expect("indices in range");
            SixManifoldModel::new(
                h2.clone(),
                h3.clone(),
                red2.clone(),
                bock.clone(),
                t,
                v2.clone(),
                c1.clone(),
            )
            .expect("normal-form data is well formed")
            .validated()
            .ok()
        })
    })
}
