//! Finite models of the degree-(2,3) cohomology of a closed, connected,
//! oriented 6-manifold `N`.
//!
//! A model records `H²(N)`, `H³(N)`, the mod-2 group `W = H²(N; Z/2)` with
//! reduction `ρ₂ : H² → W` and Bockstein `β : W → H³`, the triple-product
//! tensor `T(a, b, c) = ⟨abc, [N]⟩ mod 2`, the Wu class `v₂ = w₂(N)` and,
//! when `N` is spin^c, an integral lift `c₁` of `v₂`.
//!
//! `H⁵(N)` is never stored. A 2-torsion class of `TH⁵` is determined by its
//! linking numbers against `TH²`, and these factor through
//! `V = TH²/2TH² ≅ ρ₂(TH²) ⊆ W`, so such classes are represented as
//! functionals on `V` ([`TorsionFunctional`]).

use std::fmt;

use thiserror::Error;

use crate::abelian::{FgAbelianGroup, Order};
use crate::bockstein::ModNElement;
use crate::forms2::Z2Trilinear;
use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("model violates {} invariant(s): {}", .0.failures.len(), .0)]
    Invalid(ValidationReport),
}

fn malformed<T>(msg: impl Into<String>) -> Result<T, ModelError> {
    Err(ModelError::Malformed(msg.into()))
}

/// Raw model data, structurally well formed but not yet validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SixManifoldModel {
    h2: FgAbelianGroup,
    h3: FgAbelianGroup,
    red2: BitMatrix,
    bock: Vec<Vec<i64>>,
    triple: Z2Trilinear,
    v2: BitVector,
    c1: Option<Vec<i64>>,
}

impl SixManifoldModel {
    /// `red2` is `dim W × gens(H²)`, `bock` is `gens(H³) × dim W` with
    /// columns in `H³`, `triple` lives on `W`.
    ///
    /// Structural checks only: shapes, coordinate ranges, `red2` killing odd
    /// generators and `bock` landing in 2-torsion (both are needed for the
    /// maps to be homomorphisms at all). Use [`SixManifoldModel::validate`]
    /// for the cohomological invariants.
    pub fn new(
        h2: FgAbelianGroup,
        h3: FgAbelianGroup,
        red2: BitMatrix,
        bock: Vec<Vec<i64>>,
        triple: Z2Trilinear,
        v2: BitVector,
        c1: Option<Vec<i64>>,
    ) -> Result<Self, ModelError> {
        let dim_w = triple.dim();
        if red2.rows() != dim_w || red2.cols() != h2.ngens() {
            return malformed(format!(
                "red2 is {}x{}, expected {}x{}",
                red2.rows(),
                red2.cols(),
                dim_w,
                h2.ngens()
            ));
        }
        if bock.len() != h3.ngens() || bock.iter().any(|r| r.len() != dim_w) {
            return malformed(format!("bock must be {}x{}", h3.ngens(), dim_w));
        }
        if v2.len() != dim_w {
            return malformed(format!("v2 has length {}, expected {dim_w}", v2.len()));
        }
        if let Some(c) = &c1 {
            h2.check_element(c)
                .map_err(|e| ModelError::Malformed(format!("c1: {e}")))?;
        }
        for j in 0..h2.ngens() {
            if matches!(h2.generator_order(j), Some(d) if d % 2 != 0) && !red2.column(j).is_zero() {
                return malformed(format!("red2 sends generator {j} of odd order to a nonzero class"));
            }
        }
        let mut bock = bock;
        for j in 0..dim_w {
            let col: Vec<i64> = bock.iter().map(|r| r[j]).collect();
            let col = h3.normalize(&col);
            if !h3.is_zero(&h3.scale(2, &col)) {
                return malformed(format!("bock column {j} is not 2-torsion in H3"));
            }
            for (i, c) in col.into_iter().enumerate() {
                bock[i][j] = c;
            }
        }
        Ok(SixManifoldModel {
            h2,
            h3,
            red2,
            bock,
            triple,
            v2,
            c1,
        })
    }

    pub fn h2(&self) -> &FgAbelianGroup {
        &self.h2
    }

    pub fn h3(&self) -> &FgAbelianGroup {
        &self.h3
    }

    pub fn dim_w(&self) -> usize {
        self.triple.dim()
    }

    pub fn red2_matrix(&self) -> &BitMatrix {
        &self.red2
    }

    pub fn bock_matrix(&self) -> &[Vec<i64>] {
        &self.bock
    }

    pub fn triple(&self) -> &Z2Trilinear {
        &self.triple
    }

    pub fn v2(&self) -> &BitVector {
        &self.v2
    }

    pub fn c1(&self) -> Option<&[i64]> {
        self.c1.as_deref()
    }

    /// A copy with a different tensor (same dimension).
    pub fn with_triple(&self, triple: Z2Trilinear) -> Result<Self, ModelError> {
        let mut m = self.clone();
        if triple.dim() != self.dim_w() {
            return malformed("tensor dimension differs from dim W");
        }
        m.triple = triple;
        Ok(m)
    }

    pub fn with_c1(&self, c1: Option<Vec<i64>>) -> Result<Self, ModelError> {
        Self::new(
            self.h2.clone(),
            self.h3.clone(),
            self.red2.clone(),
            self.bock.clone(),
            self.triple.clone(),
            self.v2.clone(),
            c1,
        )
    }

    /// `ρ₂(e)` for `e ∈ H²`.
    pub fn red2(&self, e: &[i64]) -> BitVector {
        assert_eq!(e.len(), self.h2.ngens(), "element not in H2");
        let mut out = BitVector::zeros(self.dim_w());
        for (j, &c) in e.iter().enumerate() {
            if c.rem_euclid(2) == 1 {
                out += &self.red2.column(j);
            }
        }
        out
    }

    /// `β(x) ∈ H³` for `x ∈ W`.
    pub fn bock(&self, x: &BitVector) -> Vec<i64> {
        assert_eq!(x.len(), self.dim_w(), "vector not in W");
        let raw: Vec<i64> = self
            .bock
            .iter()
            .map(|row| x.support().map(|j| row[j]).sum())
            .collect();
        self.h3.normalize(&raw)
    }

    /// Indices of the H³ generators of even order; `H³[2]` has one `Z/2` per index.
    fn h3_even(&self) -> Vec<usize> {
        (0..self.h3.torsion_rank())
            .filter(|&j| self.h3.invariant_factors()[j] % 2 == 0)
            .collect()
    }

    /// Coordinates of a 2-torsion class of `H³` in the basis of `H³[2]`.
    pub fn two_torsion_bits(&self, alpha: &[i64]) -> Option<BitVector> {
        let h3 = &self.h3;
        if h3.check_element(alpha).is_err() || !h3.is_zero(&h3.scale(2, alpha)) {
            return None;
        }
        let even = self.h3_even();
        Some(BitVector::from_bits(
            even.iter()
                .map(|&j| alpha[j] / (h3.invariant_factors()[j] / 2) == 1)
                .collect(),
        ))
    }

    fn two_torsion_element(&self, bits: &BitVector) -> Vec<i64> {
        let mut out = self.h3.zero();
        for (k, j) in self.h3_even().into_iter().enumerate() {
            if bits.get(k) {
                out[j] = self.h3.invariant_factors()[j] / 2;
            }
        }
        out
    }

    /// `β` as a bit matrix `W → H³[2]`.
    fn bock_bits(&self) -> BitMatrix {
        let cols: Vec<BitVector> = (0..self.dim_w())
            .map(|j| {
                let col: Vec<i64> = self.bock.iter().map(|r| r[j]).collect();
                self.two_torsion_bits(&col).expect("columns checked at construction")
            })
            .collect();
        BitMatrix::from_columns(self.h3_even().len(), &cols)
    }

    /// H² generators of even or infinite order; their reductions span `im(ρ₂)`.
    fn reduction_generators(&self) -> Vec<usize> {
        (0..self.h2.ngens())
            .filter(|&j| self.h2.generator_order(j).is_none_or(|d| d % 2 == 0))
            .collect()
    }

    /// Checks all model invariants and reports every violation found.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let t = &self.triple;
        let dim_w = self.dim_w();
        let red_gens = self.reduction_generators();
        let red_cols: Vec<BitVector> = red_gens.iter().map(|&j| self.red2.column(j)).collect();
        let red_mat = BitMatrix::from_columns(dim_w, &red_cols);
        let bock_bits = self.bock_bits();

        // 1: mod-2 Bockstein exactness
        if let Some(k) = red_mat.kernel_basis().first() {
            let mut e = self.h2.zero();
            for i in k.support() {
                e[red_gens[i]] = 1;
            }
            failures.push(InvariantFailure::new(
                ModelInvariant::BocksteinExactness,
                Witness::ReductionKernel { element: e },
            ));
        }
        let n_even = bock_bits.rows();
        if let Some(k) = (0..n_even).find(|&k| !bock_bits.in_column_space(&BitVector::unit(n_even, k))) {
            failures.push(InvariantFailure::new(
                ModelInvariant::BocksteinExactness,
                Witness::BocksteinMissing {
                    class: self.two_torsion_element(&BitVector::unit(n_even, k)),
                },
            ));
        }
        for (i, r) in red_cols.iter().enumerate() {
            if !bock_bits.mul_vec(r).is_zero() {
                failures.push(InvariantFailure::new(
                    ModelInvariant::BocksteinExactness,
                    Witness::BocksteinOfReduction { generator: red_gens[i] },
                ));
            }
        }
        if let Some(w) = bock_bits
            .kernel_basis()
            .into_iter()
            .find(|w| !red_mat.in_column_space(w))
        {
            failures.push(InvariantFailure::new(
                ModelInvariant::BocksteinExactness,
                Witness::BocksteinKernel { w },
            ));
        }

        // 2 holds by construction of Z2Trilinear.

        // 3: T(v₂, w, r) = T(w, w, r) + T(w, r, r) on basis vectors
        for a in 0..dim_w {
            let w = BitVector::unit(dim_w, a);
            for r in &red_cols {
                let lhs = t.eval(&self.v2, &w, r);
                let rhs = t.eval(&w, &w, r) ^ t.eval(&w, r, r);
                if lhs != rhs {
                    failures.push(InvariantFailure::new(
                        ModelInvariant::WuCartan,
                        Witness::WuCartan { w: w.clone(), r: r.clone() },
                    ));
                }
            }
        }

        // 4: T(r, r', v) = 0 for r, r' integral and v torsion
        let v_basis: Vec<BitVector> = red_gens
            .iter()
            .filter(|&&j| self.h2.generator_order(j).is_some())
            .map(|&j| self.red2.column(j))
            .collect();
        for (i, r) in red_cols.iter().enumerate() {
            for r2 in &red_cols[i..] {
                for v in &v_basis {
                    if t.eval(r, r2, v) {
                        failures.push(InvariantFailure::new(
                            ModelInvariant::TorsionVanishing,
                            Witness::TorsionProduct {
                                r: r.clone(),
                                r2: r2.clone(),
                                v: v.clone(),
                            },
                        ));
                    }
                }
            }
        }

        // 5: c₁ lifts v₂, and exists exactly when β(v₂) = 0
        let v2_integral = bock_bits.mul_vec(&self.v2).is_zero();
        match (&self.c1, v2_integral) {
            (Some(c1), _) if self.red2(c1) != self.v2 => failures.push(InvariantFailure::new(
                ModelInvariant::IntegralLift,
                Witness::LiftMismatch {
                    c1: c1.clone(),
                    reduction: self.red2(c1),
                },
            )),
            (Some(_), false) => failures.push(InvariantFailure::new(
                ModelInvariant::IntegralLift,
                Witness::UnexpectedLift,
            )),
            (None, true) => failures.push(InvariantFailure::new(
                ModelInvariant::IntegralLift,
                Witness::MissingLift,
            )),
            _ => {}
        }

        // 6: V ⊆ im(ρ₂) holds by construction of V

        ValidationReport {
            failures,
            spin_c: self.c1.is_some() && v2_integral,
        }
    }

    /// Validates and pins the section choices used by every downstream computation.
    pub fn validated(self) -> Result<ValidatedModel, ModelError> {
        let report = self.validate();
        if !report.passed() {
            return Err(ModelError::Invalid(report));
        }
        let reduction_gens = self.reduction_generators();
        let reduction_basis: Vec<BitVector> =
            reduction_gens.iter().map(|&j| self.red2.column(j)).collect();
        let v_gens: Vec<usize> = reduction_gens
            .iter()
            .copied()
            .filter(|&j| self.h2.generator_order(j).is_some())
            .collect();
        let v_basis = v_gens.iter().map(|&j| self.red2.column(j)).collect();
        let bock_bits = self.bock_bits();
        let bock_section = (0..bock_bits.rows())
            .map(|k| {
                bock_bits
                    .solve(&BitVector::unit(bock_bits.rows(), k))
                    .expect("validated Bockstein is onto H3[2]")
            })
            .collect();
        Ok(ValidatedModel {
            spin_c: report.spin_c,
            model: self,
            reduction_gens,
            reduction_basis,
            v_gens,
            v_basis,
            bock_section,
        })
    }
}

/// The model invariants, numbered as listed in the model documentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelInvariant {
    /// `ker ρ₂ = 2H²`, `im β = H³[2]`, `ker β = im ρ₂`.
    BocksteinExactness,
    /// `T` fully symmetric.
    TensorSymmetry,
    /// `T(v₂, w, r) = T(w, w, r) + T(w, r, r)` for `r ∈ im ρ₂`.
    WuCartan,
    /// `T(r, r', v) = 0` for `r, r' ∈ im ρ₂`, `v ∈ V`.
    TorsionVanishing,
    /// `ρ₂(c₁) = v₂`, and `c₁` present iff `β(v₂) = 0`.
    IntegralLift,
    /// `V ⊆ im ρ₂`.
    TorsionImage,
}

impl ModelInvariant {
    pub fn number(self) -> u8 {
        match self {
            ModelInvariant::BocksteinExactness => 1,
            ModelInvariant::TensorSymmetry => 2,
            ModelInvariant::WuCartan => 3,
            ModelInvariant::TorsionVanishing => 4,
            ModelInvariant::IntegralLift => 5,
            ModelInvariant::TorsionImage => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelInvariant::BocksteinExactness => "bockstein-exactness",
            ModelInvariant::TensorSymmetry => "tensor-symmetry",
            ModelInvariant::WuCartan => "wu-cartan",
            ModelInvariant::TorsionVanishing => "torsion-vanishing",
            ModelInvariant::IntegralLift => "integral-lift",
            ModelInvariant::TorsionImage => "torsion-image",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// An element outside `2H²` with zero reduction.
    ReductionKernel { element: Vec<i64> },
    /// A class of `H³[2]` not hit by `β`.
    BocksteinMissing { class: Vec<i64> },
    /// A generator whose reduction has nonzero Bockstein.
    BocksteinOfReduction { generator: usize },
    /// A class with zero Bockstein that is not a reduction.
    BocksteinKernel { w: BitVector },
    WuCartan { w: BitVector, r: BitVector },
    TorsionProduct { r: BitVector, r2: BitVector, v: BitVector },
    LiftMismatch { c1: Vec<i64>, reduction: BitVector },
    UnexpectedLift,
    MissingLift,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ReductionKernel { element } => {
                write!(f, "H2 element {element:?} is not in 2H2 but reduces to 0")
            }
            Witness::BocksteinMissing { class } => write!(f, "H3[2] class {class:?} is not a Bockstein"),
            Witness::BocksteinOfReduction { generator } => {
                write!(f, "bock(red2(generator {generator})) != 0")
            }
            Witness::BocksteinKernel { w } => write!(f, "w = {w} has bock(w) = 0 but is not a reduction"),
            Witness::WuCartan { w, r } => {
                write!(f, "T(v2,w,r) != T(w,w,r) + T(w,r,r) at w = {w}, r = {r}")
            }
            Witness::TorsionProduct { r, r2, v } => {
                write!(f, "T(r,r',v) = 1 at r = {r}, r' = {r2}, v = {v}")
            }
            Witness::LiftMismatch { c1, reduction } => {
                write!(f, "red2(c1 = {c1:?}) = {reduction} differs from v2")
            }
            Witness::UnexpectedLift => f.write_str("c1 given but bock(v2) != 0"),
            Witness::MissingLift => f.write_str("bock(v2) = 0 but no c1 given"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFailure {
    pub invariant: ModelInvariant,
    pub witness: Witness,
}

impl InvariantFailure {
    fn new(invariant: ModelInvariant, witness: Witness) -> Self {
        InvariantFailure { invariant, witness }
    }
}

impl fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invariant {} ({}): {}",
            self.invariant.number(),
            self.invariant.name(),
            self.witness
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<InvariantFailure>,
    pub spin_c: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn violates(&self, invariant: ModelInvariant) -> bool {
        self.failures.iter().any(|f| f.invariant == invariant)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.failures.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// A 2-torsion class of `TH⁵`, recorded by its values on the basis of `V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionFunctional {
    pub coefficients: BitVector,
}

impl TorsionFunctional {
    pub fn is_zero(&self) -> bool {
        self.coefficients.is_zero()
    }
}

impl fmt::Display for TorsionFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coefficients)
    }
}

/// A model that passed [`SixManifoldModel::validate`], with its section
/// choices pinned: `V` and `im ρ₂` get the reductions of H² generators as
/// bases, and `β` gets a fixed section `H³[2] → W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedModel {
    model: SixManifoldModel,
    spin_c: bool,
    reduction_gens: Vec<usize>,
    reduction_basis: Vec<BitVector>,
    v_gens: Vec<usize>,
    v_basis: Vec<BitVector>,
    bock_section: Vec<BitVector>,
}

impl ValidatedModel {
    pub fn model(&self) -> &SixManifoldModel {
        &self.model
    }

    pub fn into_model(self) -> SixManifoldModel {
        self.model
    }

    pub fn is_spin_c(&self) -> bool {
        self.spin_c
    }

    pub fn dim_w(&self) -> usize {
        self.model.dim_w()
    }

    pub fn triple(&self) -> &Z2Trilinear {
        &self.model.triple
    }

    /// Basis of `V = ρ₂(TH²)`: reductions of the even-order torsion generators.
    pub fn v_basis(&self) -> &[BitVector] {
        &self.v_basis
    }

    /// Basis of `im ρ₂`: reductions of the even-order and free generators.
    pub fn reduction_basis(&self) -> &[BitVector] {
        &self.reduction_basis
    }

    pub fn red2(&self, e: &[i64]) -> BitVector {
        self.model.red2(e)
    }

    pub fn bock(&self, x: &BitVector) -> Vec<i64> {
        self.model.bock(x)
    }

    /// The pinned lift `TH² ← V`: basis vector `i` of `V` goes to its generator.
    pub fn lift_v(&self, coords: &BitVector) -> Vec<i64> {
        assert_eq!(coords.len(), self.v_gens.len(), "vector not in V");
        let mut e = self.model.h2.zero();
        for i in coords.support() {
            e[self.v_gens[i]] = 1;
        }
        e
    }

    /// The pinned lift `H² ← im ρ₂` in reduction-basis coordinates.
    pub fn lift_reduction(&self, coords: &BitVector) -> Vec<i64> {
        assert_eq!(coords.len(), self.reduction_gens.len(), "vector not in im red2");
        let mut e = self.model.h2.zero();
        for i in coords.support() {
            e[self.reduction_gens[i]] = 1;
        }
        e
    }

    /// The pinned preimage `x` of a 2-torsion class, or `None` if `2α ≠ 0`.
    pub fn bock_section(&self, alpha: &[i64]) -> Option<BitVector> {
        let bits = self.model.two_torsion_bits(alpha)?;
        let mut x = BitVector::zeros(self.dim_w());
        for k in bits.support() {
            x += &self.bock_section[k];
        }
        Some(x)
    }

    /// Every `x ∈ W` with `β(x) = α`: the pinned preimage plus `im ρ₂`.
    pub fn bock_preimages(&self, alpha: &[i64]) -> Vec<BitVector> {
        let Some(x0) = self.bock_section(alpha) else {
            return vec![];
        };
        BitVector::all(self.reduction_basis.len())
            .map(|c| {
                let mut x = x0.clone();
                for i in c.support() {
                    x += &self.reduction_basis[i];
                }
                x
            })
            .collect()
    }

    /// The splitting isomorphism `C₂ = (H² ⊗ Z/2) ⊕ H³[2] → W`: `ρ₂` on the
    /// tensor summand and the pinned Bockstein section on the torsion summand.
    pub fn mod2_class(&self, xi: &ModNElement) -> BitVector {
        let mut x = self.model.red2(&xi.tensor);
        let alpha = {
            let h3 = &self.model.h3;
            let mut a = h3.zero();
            for (j, &c) in xi.torsion.iter().enumerate() {
                let d = h3.invariant_factors()[j];
                if d % 2 == 0 {
                    a[j] = c * (d / 2);
                }
            }
            a
        };
        x += &self.bock_section(&alpha).expect("torsion summand is 2-torsion");
        x
    }

    /// `β^{Z/2}(x²) ∈ TH⁵[2]` as the functional `v ↦ T(x, x, v)` on `V`.
    pub fn beta_square_functional(&self, x: &BitVector) -> TorsionFunctional {
        let t = &self.model.triple;
        TorsionFunctional {
            coefficients: BitVector::from_bits(self.v_basis.iter().map(|v| t.eval(x, x, v)).collect()),
        }
    }

    /// `β^{Z/2}(x)·e ∈ TH⁵[2]` as the functional `v ↦ T(x, ρ₂(e), v)` on `V`.
    pub fn beta_times_functional(&self, x: &BitVector, e: &[i64]) -> TorsionFunctional {
        let t = &self.model.triple;
        let r = self.model.red2(e);
        TorsionFunctional {
            coefficients: BitVector::from_bits(self.v_basis.iter().map(|v| t.eval(x, &r, v)).collect()),
        }
    }

    /// Period of a class in `H³`.
    pub fn order_in_h3(&self, alpha: &[i64]) -> Option<Order> {
        self.model.h3.element_order(alpha).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{model_a_teichner_orientable, model_b_teichner_nonorientable};

    fn bits(b: &[u8]) -> BitVector {
        BitVector::from_u8s(b)
    }

    #[test]
    fn model_a_validates() {
        let m = model_a_teichner_orientable().into_model();
        let report = m.validate();
        assert!(report.passed(), "{report}");
        assert!(report.spin_c);
    }

    #[test]
    fn model_b_validates_not_spin_c() {
        let m = model_b_teichner_nonorientable().into_model();
        let report = m.validate();
        assert!(report.passed(), "{report}");
        assert!(!report.spin_c);
    }

    #[test]
    fn flipping_wu_entry_breaks_invariant_3() {
        let m = model_a_teichner_orientable().into_model();
        // W = span{t, x}; clear T(x, t, t)
        let broken = m.with_triple(m.triple().with_entry(1, 0, 0, false)).unwrap();
        let report = broken.validate();
        assert!(!report.passed());
        assert!(report.failures.contains(&InvariantFailure {
            invariant: ModelInvariant::WuCartan,
            witness: Witness::WuCartan { w: bits(&[0, 1]), r: bits(&[1, 0]) },
        }));
        assert!(broken.validated().is_err());
    }

    #[test]
    fn torsion_vanishing_detected() {
        let m = model_a_teichner_orientable().into_model();
        let broken = m.with_triple(m.triple().with_entry(0, 0, 0, true)).unwrap();
        assert!(broken.validate().violates(ModelInvariant::TorsionVanishing));
    }

    #[test]
    fn lift_rules() {
        let a = model_a_teichner_orientable().into_model();
        let missing = a.with_c1(None).unwrap().validate();
        assert!(missing.failures.iter().any(|f| f.witness == Witness::MissingLift));
        let wrong = a.with_c1(Some(vec![1])).unwrap().validate();
        assert!(wrong.violates(ModelInvariant::IntegralLift));
        let b = model_b_teichner_nonorientable().into_model();
        let extra = b.with_c1(Some(vec![0])).unwrap().validate();
        assert!(extra.violates(ModelInvariant::IntegralLift));
    }

    #[test]
    fn exactness_failures() {
        // H2 = Z/4 but red2 = 0: ker red2 is too big
        let m = SixManifoldModel::new(
            FgAbelianGroup::cyclic(4),
            FgAbelianGroup::trivial(),
            BitMatrix::zeros(1, 1),
            vec![],
            Z2Trilinear::zero(1),
            bits(&[0]),
            Some(vec![0]),
        )
        .unwrap();
        let report = m.validate();
        assert!(report.failures.iter().any(|f| matches!(f.witness, Witness::ReductionKernel { .. })));
        assert!(report.failures.iter().any(|f| matches!(f.witness, Witness::BocksteinKernel { .. })));
    }

    #[test]
    fn malformed_shapes() {
        let err = SixManifoldModel::new(
            FgAbelianGroup::cyclic(4),
            FgAbelianGroup::cyclic(4),
            BitMatrix::zeros(1, 1),
            vec![vec![1]],
            Z2Trilinear::zero(1),
            bits(&[0]),
            None,
        );
        assert!(matches!(err, Err(ModelError::Malformed(_))), "bock column not 2-torsion");
        let err = SixManifoldModel::new(
            FgAbelianGroup::cyclic(3),
            FgAbelianGroup::trivial(),
            BitMatrix::from_u8_rows(&[&[1]]),
            vec![],
            Z2Trilinear::zero(1),
            bits(&[0]),
            None,
        );
        assert!(matches!(err, Err(ModelError::Malformed(_))), "odd generator reduced");
    }

    #[test]
    fn functionals_on_model_a() {
        let m = model_a_teichner_orientable();
        let x = bits(&[0, 1]);
        assert_eq!(m.beta_square_functional(&x).coefficients, bits(&[1]));
        assert!(m.beta_square_functional(&bits(&[0, 0])).is_zero());
        assert!(m.beta_square_functional(&bits(&[1, 0])).is_zero());
        assert_eq!(m.beta_times_functional(&x, &[1]).coefficients, bits(&[1]));
        assert!(m.beta_times_functional(&x, &[0]).is_zero());
        assert!(m.beta_times_functional(&x, &[2]).is_zero());
    }

    #[test]
    fn sections_on_model_b() {
        let m = model_b_teichner_nonorientable();
        assert_eq!(m.bock_section(&[1, 0]), Some(bits(&[0, 1, 0])));
        assert_eq!(m.bock_section(&[0, 1]), Some(bits(&[0, 0, 1])));
        let pre = m.bock_preimages(&[1, 0]);
        assert_eq!(pre, vec![bits(&[0, 1, 0]), bits(&[1, 1, 0])]);
        for x in pre {
            assert_eq!(m.bock(&x), vec![1, 0]);
        }
    }
}
