//! Period and index of torsion classes `α ∈ TH³(N)`.
//!
//! The index is read off the Antieau–Williams formula
//! `ind(α) = ord(Q̃(ξ))·per(α)` where `Q̃(ξ) ∈ H⁵/αH²`. For `per = 2` the
//! order of `Q̃` is pinned down by two facts about the Pontrjagin square of
//! `x = ρ₂(ξ)`: its reduction is `x²`, and `2·β^{Z/4}(P₂x) = β^{Z/2}(x²)`.
//! So `Q̃` has order 4 exactly when `β(x²) ∉ β(x)H²`, order 2 when
//! `β(x²)` is a nonzero member of that coset space, and order 1 or 2 when
//! `β(x²) = 0` (which needs the Pontrjagin square itself to decide).

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::abelian::Order;
use crate::bockstein::{ModNElement, ModNModel};
use crate::forms2::Z2SymForm;
use crate::gf2::{BitMatrix, BitVector};
use crate::model6::{TorsionFunctional, ValidatedModel};

/// Preimages of a class are all compared only while `|W|` stays below this.
pub const X_INDEPENDENCE_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodIndexError {
    #[error("{0:?} is not an element of H3")]
    MalformedClass(Vec<i64>),
    #[error("class {0:?} has infinite order and is not a Brauer class")]
    NotTorsion(Vec<i64>),
    #[error("vector has length {found}, W has dimension {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("model is not spin^c (no integral lift of v2)")]
    NotSpinC,
    #[error("classifier needs period 2, got {0}")]
    PeriodNotTwo(u64),
    #[error("period {0} is odd; odd classes satisfy ind | per^2 without a certificate")]
    OddPeriod(u64),
    #[error("hint contradicts the computed regime {0}")]
    InconsistentHint(Regime),
    #[error("certificate check failed: {0}")]
    InvariantViolation(String),
}

type Result<T> = std::result::Result<T, PeriodIndexError>;

fn check_x(m: &ValidatedModel, x: &BitVector) -> Result<()> {
    if x.len() != m.dim_w() {
        return Err(PeriodIndexError::WrongLength {
            expected: m.dim_w(),
            found: x.len(),
        });
    }
    Ok(())
}

/// `per(α)`, the order of `α` in `H³`.
pub fn period(m: &ValidatedModel, alpha: &[i64]) -> Result<u64> {
    match m.order_in_h3(alpha) {
        None => Err(PeriodIndexError::MalformedClass(alpha.to_vec())),
        Some(Order::Infinite) => Err(PeriodIndexError::NotTorsion(alpha.to_vec())),
        Some(Order::Finite(n)) => Ok(n),
    }
}

/// The spin^c certificate for `x`: `e_x = c₁ + d_x` with
/// `β(x²) = β(x)·e_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExCertificate {
    pub x: BitVector,
    /// `λ_x(y, z) = T(y, x, z)` on `V`.
    pub lambda: Z2SymForm,
    /// Pinned solution of `λ_x(d, ·) = λ_x(·, ·)` in `V` coordinates.
    pub d: BitVector,
    pub d_lift: Vec<i64>,
    pub c1: Vec<i64>,
    pub e_x: Vec<i64>,
}

/// Produces `e_x` with `T(x, x, v) = T(x, ρ₂(e_x), v)` for every `v ∈ V`.
///
/// `λ_x` is symmetric, so its diagonal lies in its column space; `d` is the
/// pinned solution. With `v₂ = ρ₂(c₁)` the Wu relation gives
/// `T(x, c₁, v) = T(x, x, v) + T(x, v, v)` and `T(x, d, v) = T(v, x, v)`,
/// which sum to the required identity.
pub fn solve_ex(m: &ValidatedModel, x: &BitVector) -> Result<ExCertificate> {
    check_x(m, x)?;
    let c1 = m.model().c1().filter(|_| m.is_spin_c()).ok_or(PeriodIndexError::NotSpinC)?;
    let lambda = m
        .triple()
        .form_from_trilinear(x, m.v_basis())
        .map_err(|e| PeriodIndexError::InvariantViolation(e.to_string()))?;
    let d = lambda.solve_diagonal();
    let d_lift = m.lift_v(&d);
    let e_x = m.model().h2().add(c1, &d_lift);
    let lhs = m.beta_square_functional(x);
    let rhs = m.beta_times_functional(x, &e_x);
    if lhs != rhs {
        return Err(PeriodIndexError::InvariantViolation(format!(
            "beta(x^2) = {lhs} but beta(x)e_x = {rhs} at x = {x}"
        )));
    }
    Ok(ExCertificate {
        x: x.clone(),
        lambda,
        d,
        d_lift,
        c1: c1.to_vec(),
        e_x,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `β(x²) = β(x)·witness`.
    Member { witness: Vec<i64> },
    /// No `e` works; `target` is the functional of `β(x²)` that is missed.
    NonMember { target: TorsionFunctional },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Decides `β(x²) ∈ β(x)H²` by solving `T(x, ρ₂(e), ·) = T(x, x, ·)` on
/// `V` for `ρ₂(e) ∈ im ρ₂`. The witness is the pinned least solution in
/// reduction-basis coordinates, lifted to H².
pub fn membership(m: &ValidatedModel, x: &BitVector) -> Result<Membership> {
    check_x(m, x)?;
    let t = m.triple();
    let v = m.v_basis();
    let r = m.reduction_basis();
    let mut system = BitMatrix::zeros(v.len(), r.len());
    for (j, vj) in v.iter().enumerate() {
        for (i, ri) in r.iter().enumerate() {
            system.set(j, i, t.eval(x, ri, vj));
        }
    }
    let target = m.beta_square_functional(x);
    Ok(match system.solve(&target.coefficients) {
        Some(c) => Membership::Member {
            witness: m.lift_reduction(&c),
        },
        None => Membership::NonMember { target },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Odd,
    MemberNonzero,
    MemberZero,
    NonMember,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Odd => "ODD",
            Regime::MemberNonzero => "MEMBER_NONZERO",
            Regime::MemberZero => "MEMBER_ZERO",
            Regime::NonMember => "NON_MEMBER",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexValue {
    Exact(u64),
    /// The index is one of these values (sorted, at least two).
    Interval(Vec<u64>),
}

impl IndexValue {
    fn from_candidates(mut c: Vec<u64>) -> Self {
        c.sort_unstable();
        c.dedup();
        if c.len() == 1 {
            IndexValue::Exact(c[0])
        } else {
            IndexValue::Interval(c)
        }
    }

    pub fn candidates(&self) -> Vec<u64> {
        match self {
            IndexValue::Exact(i) => vec![*i],
            IndexValue::Interval(c) => c.clone(),
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match self {
            IndexValue::Exact(i) => Some(*i),
            IndexValue::Interval(_) => None,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Exact(i) => write!(f, "{i}"),
            IndexValue::Interval(c) => {
                let parts: Vec<String> = c.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrauerClassReport {
    pub alpha: Vec<i64>,
    pub period: u64,
    pub index: IndexValue,
    pub regime: Regime,
    /// `ε(n)·n²` with `ε(n) = gcd(n, 2)`.
    pub epsilon_bound: u64,
    /// `Some(true)` if `ind | per²` for every candidate index, `Some(false)`
    /// if for none, `None` otherwise.
    pub tpic: Option<bool>,
    /// `e_x` (spin^c) or a membership witness for the pinned preimage.
    pub certificate: Option<Vec<i64>>,
}

impl BrauerClassReport {
    /// `per | ind`, `ind | ε(n)n²`, and a `true` verdict means `ind | n²`.
    pub fn check_arithmetic(&self) -> std::result::Result<(), String> {
        let n = self.period;
        for c in self.index.candidates() {
            if c % n != 0 {
                return Err(format!("per {n} does not divide ind {c}"));
            }
            if !self.epsilon_bound.is_multiple_of(c) {
                return Err(format!("ind {c} does not divide bound {}", self.epsilon_bound));
            }
            if self.tpic == Some(true) && !(n * n).is_multiple_of(c) {
                return Err(format!("TPIC claimed but ind {c} does not divide {}", n * n));
            }
        }
        Ok(())
    }
}

pub fn epsilon_bound(n: u64) -> u64 {
    n.gcd(&2) * n * n
}

fn tpic_verdict(period: u64, index: &IndexValue) -> Option<bool> {
    let sq = period * period;
    let c = index.candidates();
    if c.iter().all(|i| sq.is_multiple_of(*i)) {
        Some(true)
    } else if c.iter().all(|i| !sq.is_multiple_of(*i)) {
        Some(false)
    } else {
        None
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Certificate carried in reports: computed at the pinned preimage of `α`
/// so it does not depend on which preimage a caller started from.
fn canonical_certificate(m: &ValidatedModel, x0: &BitVector, member: bool) -> Result<Option<Vec<i64>>> {
    if m.is_spin_c() {
        return Ok(Some(solve_ex(m, x0)?.e_x));
    }
    if !member {
        return Ok(None);
    }
    Ok(match membership(m, x0)? {
        Membership::Member { witness } => Some(witness),
        Membership::NonMember { .. } => None,
    })
}

/// Index of `α = β(x)` when `per(α) = 2`.
///
/// `p2_hint` is the answer to "is `β^{Z/4}(P₂x) ∈ αH²`?" and only matters
/// when `β(x²) = 0`. A `true` hint is rejected when `β(x²) ≠ 0`, since
/// then `Q̃ ≠ 0` is already proven.
pub fn classify_index_period2(
    m: &ValidatedModel,
    x: &BitVector,
    p2_hint: Option<bool>,
) -> Result<BrauerClassReport> {
    check_x(m, x)?;
    let alpha = m.bock(x);
    let n = period(m, &alpha)?;
    if n != 2 {
        return Err(PeriodIndexError::PeriodNotTwo(n));
    }
    let square = m.beta_square_functional(x);
    let member = membership(m, x)?.is_member();
    let (regime, index) = match (member, square.is_zero()) {
        (false, _) => (Regime::NonMember, IndexValue::Exact(8)),
        (true, false) => (Regime::MemberNonzero, IndexValue::Exact(4)),
        (true, true) => (
            Regime::MemberZero,
            match p2_hint {
                Some(true) => IndexValue::Exact(2),
                Some(false) => IndexValue::Exact(4),
                None => IndexValue::Interval(vec![2, 4]),
            },
        ),
    };
    if p2_hint == Some(true) && regime != Regime::MemberZero {
        return Err(PeriodIndexError::InconsistentHint(regime));
    }
    let x0 = m.bock_section(&alpha).expect("order-2 class has a section");
    Ok(BrauerClassReport {
        tpic: tpic_verdict(n, &index),
        certificate: canonical_certificate(m, &x0, member)?,
        alpha,
        period: n,
        index,
        regime,
        epsilon_bound: epsilon_bound(n),
    })
}

/// The chain behind `ind | per²` for a class of even order on a spin^c model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenPeriodCertificate {
    pub alpha: Vec<i64>,
    pub period: u64,
    /// `ξ ∈ H²(Z/per)` with `β^{Z/per}(ξ) = α`; absent for `α = 0`.
    pub xi: Option<ModNElement>,
    /// `x = ρ₂(ξ) ∈ W`, with `β(x) = (per/2)·α`.
    pub x: Option<BitVector>,
    pub ex: Option<ExCertificate>,
    /// The certified conclusion `ind(α) | index_divides`.
    pub index_divides: u64,
}

/// `ξ` with `β^{Z/2m}(ξ) = α` and its mod-2 reduction `x ∈ W`.
fn reduce_to_mod2(m: &ValidatedModel, alpha: &[i64], order: u64) -> Result<(ModNElement, BitVector)> {
    let h2 = m.model().h2().clone();
    let h3 = m.model().h3().clone();
    let big = ModNModel::new(h2.clone(), h3.clone(), order as i64)
        .map_err(|e| PeriodIndexError::InvariantViolation(e.to_string()))?;
    let two = ModNModel::new(h2, h3, 2).expect("modulus 2 is valid");
    let xi = big
        .beta_preimage_in_torsion(alpha)
        .ok_or_else(|| PeriodIndexError::InvariantViolation("no Bockstein preimage".into()))?;
    let reduce = big
        .coeff_reduce(&two)
        .map_err(|e| PeriodIndexError::InvariantViolation(e.to_string()))?;
    let x = m.mod2_class(&reduce.apply(&xi));
    let expected = m.model().h3().scale((order / 2) as i64, alpha);
    if m.bock(&x) != expected {
        return Err(PeriodIndexError::InvariantViolation(format!(
            "bock(x) = {:?}, expected {:?}",
            m.bock(&x),
            expected
        )));
    }
    Ok((xi, x))
}

/// Builds `ξ`, reduces it to `x` (checking `β(x) = m·α`), and runs
/// [`solve_ex`], concluding `2m·Q̃(ξ) = 0` and so `ind(α) | per(α)²`.
pub fn even_period_certificate(m: &ValidatedModel, alpha: &[i64]) -> Result<EvenPeriodCertificate> {
    let n = period(m, alpha)?;
    if !m.is_spin_c() {
        return Err(PeriodIndexError::NotSpinC);
    }
    if n == 1 {
        return Ok(EvenPeriodCertificate {
            alpha: alpha.to_vec(),
            period: 1,
            xi: None,
            x: None,
            ex: None,
            index_divides: 1,
        });
    }
    if n % 2 == 1 {
        return Err(PeriodIndexError::OddPeriod(n));
    }
    let (xi, x) = reduce_to_mod2(m, alpha, n)?;
    let ex = solve_ex(m, &x)?;
    Ok(EvenPeriodCertificate {
        alpha: alpha.to_vec(),
        period: n,
        xi: Some(xi),
        x: Some(x),
        ex: Some(ex),
        index_divides: n * n,
    })
}

fn report_higher_even(m: &ValidatedModel, alpha: &[i64], n: u64) -> Result<BrauerClassReport> {
    let (_, x) = reduce_to_mod2(m, alpha, n)?;
    let member = membership(m, &x)?;
    let regime = match (&member, m.beta_square_functional(&x).is_zero()) {
        (Membership::NonMember { .. }, _) => Regime::NonMember,
        (_, false) => Regime::MemberNonzero,
        (_, true) => Regime::MemberZero,
    };
    // membership gives n·Q̃ = 0; otherwise only 2n·Q̃ = 0 is known
    let bound = if member.is_member() { n } else { 2 * n };
    let index = IndexValue::from_candidates(divisors(bound).into_iter().map(|d| n * d).collect());
    let certificate = if m.is_spin_c() {
        Some(even_period_certificate(m, alpha)?.ex.expect("even order").e_x)
    } else {
        match member {
            Membership::Member { witness } => Some(witness),
            Membership::NonMember { .. } => None,
        }
    };
    Ok(BrauerClassReport {
        alpha: alpha.to_vec(),
        period: n,
        tpic: tpic_verdict(n, &index),
        index,
        regime,
        epsilon_bound: epsilon_bound(n),
        certificate,
    })
}

fn report_odd(alpha: &[i64], n: u64) -> BrauerClassReport {
    let index = IndexValue::from_candidates(divisors(n).into_iter().map(|d| n * d).collect());
    BrauerClassReport {
        alpha: alpha.to_vec(),
        period: n,
        tpic: tpic_verdict(n, &index),
        index,
        regime: Regime::Odd,
        epsilon_bound: epsilon_bound(n),
        certificate: None,
    }
}

/// The report for one nonzero torsion class.
pub fn class_report(m: &ValidatedModel, alpha: &[i64]) -> Result<BrauerClassReport> {
    let n = period(m, alpha)?;
    match n {
        1 => Err(PeriodIndexError::MalformedClass(alpha.to_vec())),
        2 => {
            let x0 = m.bock_section(alpha).expect("order-2 class has a section");
            classify_index_period2(m, &x0, None)
        }
        n if n % 2 == 0 => report_higher_even(m, alpha, n),
        n => Ok(report_odd(alpha, n)),
    }
}

/// One report per nonzero class of `TH³`, in enumeration order.
///
/// For classes of order 2 every preimage `x` is classified when
/// `dim W ≤ X_INDEPENDENCE_LIMIT`, and the reports must agree.
///
/// # Panics
///
/// If two preimages of a class disagree or a certificate fails its own
/// check; both mean the model data or the engine is inconsistent.
pub fn tpic_report(m: &ValidatedModel) -> Vec<BrauerClassReport> {
    let h3 = m.model().h3();
    h3.torsion_elements()
        .filter(|a| !h3.is_zero(a))
        .map(|alpha| {
            let report = class_report(m, &alpha).unwrap_or_else(|e| panic!("class {alpha:?}: {e}"));
            if report.period == 2 && m.dim_w() <= X_INDEPENDENCE_LIMIT {
                for x in m.bock_preimages(&alpha) {
                    let other = classify_index_period2(m, &x, None)
                        .unwrap_or_else(|e| panic!("class {alpha:?}, x = {x}: {e}"));
                    assert_eq!(other, report, "report depends on the preimage x = {x}");
                }
            }
            report
        })
        .collect()
}

/// Whether every report in the list satisfies `ind | per²`.
/// `None` if some verdict is undecided and none fails.
pub fn tpic_holds(reports: &[BrauerClassReport]) -> Option<bool> {
    if reports.iter().any(|r| r.tpic == Some(false)) {
        Some(false)
    } else if reports.iter().all(|r| r.tpic == Some(true)) {
        Some(true)
    } else {
        None
    }
}
