//! Exact period and index computations for torsion Brauer classes on finite
//! cohomology models of closed oriented 6-manifolds.
//!
//! The pipeline:
//!
//! * [`abelian`] and [`linking`] handle finitely generated abelian groups and
//!   `Q/Z`-valued pairings.
//! * [`gf2`] and [`forms2`] do linear algebra, symmetric forms and trilinear
//!   tensors over `GF(2)`.
//! * [`bockstein`] models `H^*(X; Z/n)` via the universal coefficient
//!   splitting, with its Bockstein and reduction maps.
//! * [`model6`] holds the 6-manifold input record and its validation.
//! * [`periodindex`] produces the spin^c certificate `e_x` and classifies
//!   every torsion class of `H³`.
//! * [`grouptransfer`] computes abelianizations and index-2 transfers of
//!   finite groups.
//! * [`examples`] builds reference models and enumerates small ones.
//!
//! ```
//! use brauer_index::examples::model_a_teichner_orientable;
//! use brauer_index::periodindex::{tpic_report, IndexValue};
//!
//! let model = model_a_teichner_orientable();
//! let reports = tpic_report(&model);
//! assert_eq!(reports.len(), 1);
//! assert_eq!(reports[0].period, 2);
//! assert_eq!(reports[0].index, IndexValue::Exact(4));
//! ```

pub mod abelian;
pub mod bockstein;
pub mod examples;
pub mod forms2;
pub mod gf2;
pub mod grouptransfer;
pub mod linking;
pub mod model6;
pub mod periodindex;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/bockstein.md")]
    mod bockstein {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/period-index.md")]
    mod period_index {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
}
