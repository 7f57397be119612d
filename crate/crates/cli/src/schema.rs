//! Model and report documents.
//!
//! Model files are JSON:
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "name": "MODEL-A",
//!   "manifold": {
//!     "H2": {"invariant_factors": [4], "free_rank": 0},
//!     "H3": {"invariant_factors": [2], "free_rank": 0},
//!     "dim_W": 2,
//!     "red2": [[1], [0]],
//!     "bock": [[0, 1]],
//!     "T": [[0, 1, 1], [0, 0, 1]],
//!     "v2": [0, 0],
//!     "c1": [0]
//!   }
//! }
//! ```
//!
//! `red2` has one row per basis vector of `W` and one column per H²
//! generator; `bock` has one row per H³ generator and one column per basis
//! vector of `W`; `T` lists one sorted triple per nonzero symmetry orbit.

use brauer_index::abelian::FgAbelianGroup;
use brauer_index::forms2::Z2Trilinear;
use brauer_index::gf2::{BitMatrix, BitVector};
use brauer_index::model6::{SixManifoldModel, ValidatedModel};
use brauer_index::periodindex::{tpic_holds, BrauerClassReport, IndexValue};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub manifold: ManifoldDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub invariant_factors: Vec<i64>,
    pub free_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDoc {
    #[serde(rename = "H2")]
    pub h2: GroupDoc,
    #[serde(rename = "H3")]
    pub h3: GroupDoc,
    #[serde(rename = "dim_W")]
    pub dim_w: usize,
    pub red2: Vec<Vec<u8>>,
    pub bock: Vec<Vec<i64>>,
    #[serde(rename = "T")]
    pub triples: Vec<[usize; 3]>,
    pub v2: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<Vec<i64>>,
}

fn group(doc: &GroupDoc, which: &str) -> Result<FgAbelianGroup, String> {
    FgAbelianGroup::new(doc.invariant_factors.clone(), doc.free_rank).map_err(|e| format!("{which}: {e}"))
}

fn bits(row: &[u8], what: &str) -> Result<BitVector, String> {
    if let Some(b) = row.iter().find(|&&b| b > 1) {
        return Err(format!("{what}: entry {b} is not a bit"));
    }
    Ok(BitVector::from_u8s(row))
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| format!("invalid model file: {e}"))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema_version {:?} (expected {SCHEMA_VERSION:?})",
                file.schema_version
            ));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    /// Structural conversion; semantic invariants are left to validation.
    pub fn to_model(&self) -> Result<SixManifoldModel, String> {
        let m = &self.manifold;
        let h2 = group(&m.h2, "H2")?;
        let h3 = group(&m.h3, "H3")?;
        if m.red2.len() != m.dim_w {
            return Err(format!("red2 has {} rows, dim_W is {}", m.red2.len(), m.dim_w));
        }
        let rows = m
            .red2
            .iter()
            .map(|r| {
                if r.len() != h2.ngens() {
                    return Err(format!("red2 rows need {} entries", h2.ngens()));
                }
                bits(r, "red2")
            })
            .collect::<Result<Vec<_>, _>>()?;
        let red2 = BitMatrix::from_rows(h2.ngens(), rows);
        let triple = Z2Trilinear::from_triples(m.dim_w, &m.triples).map_err(|e| format!("T: {e}"))?;
        let v2 = bits(&m.v2, "v2")?;
        SixManifoldModel::new(h2, h3, red2, m.bock.clone(), triple, v2, m.c1.clone()).map_err(|e| e.to_string())
    }

    pub fn from_model(model: &SixManifoldModel, name: Option<&str>, notes: Option<&str>) -> Self {
        let doc = |g: &FgAbelianGroup| GroupDoc {
            invariant_factors: g.invariant_factors().to_vec(),
            free_rank: g.free_rank(),
        };
        let to_u8 = |v: &BitVector| v.iter().map(u8::from).collect::<Vec<u8>>();
        ModelFile {
            schema_version: SCHEMA_VERSION.to_string(),
            name: name.map(str::to_string),
            notes: notes.map(str::to_string),
            manifold: ManifoldDoc {
                h2: doc(model.h2()),
                h3: doc(model.h3()),
                dim_w: model.dim_w(),
                red2: (0..model.dim_w()).map(|i| to_u8(model.red2_matrix().row(i))).collect(),
                bock: model.bock_matrix().to_vec(),
                triples: model.triple().nonzero_triples(),
                v2: to_u8(model.v2()),
                c1: model.c1().map(<[i64]>::to_vec),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub alpha: Vec<i64>,
    pub period: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_exact: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_interval: Option<Vec<u64>>,
    pub regime: String,
    pub epsilon_bound: u64,
    pub tpic: Option<bool>,
    pub certificate_e_x: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub model: Option<String>,
    pub spin_c: bool,
    pub classes: Vec<ClassDoc>,
    pub tpic_holds: Option<bool>,
}

impl ReportDoc {
    pub fn new(name: Option<&str>, model: &ValidatedModel, reports: &[BrauerClassReport]) -> Self {
        let classes = reports
            .iter()
            .map(|r| ClassDoc {
                alpha: r.alpha.clone(),
                period: r.period,
                index_exact: r.index.exact(),
                index_interval: match &r.index {
                    IndexValue::Interval(c) => Some(c.clone()),
                    IndexValue::Exact(_) => None,
                },
                regime: r.regime.as_str().to_string(),
                epsilon_bound: r.epsilon_bound,
                tpic: r.tpic,
                certificate_e_x: r.certificate.clone(),
            })
            .collect();
        ReportDoc {
            model: name.map(str::to_string),
            spin_c: model.is_spin_c(),
            classes,
            tpic_holds: tpic_holds(reports),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }
}
