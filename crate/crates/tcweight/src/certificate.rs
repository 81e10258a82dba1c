//! Self-contained JSON form of a certificate.
//!
//! Elements are lists of terms over the leaf factors of the ring: a term's
//! `index` has one basis index per leaf for `H*(X)` and two blocks of them for
//! `H*(X) ⊗ H*(X)`. Scalars are exact strings (`"-2"`, `"3/7"`, residues as
//! `"4"`) read in the field named by the header.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tcweight_core::engine::{Certificate, ProductWitness, SearchReport, Witness, WitnessFactor};
use tcweight_core::error::RingError;
use tcweight_core::ring::{GradedAlgebra, Sparse};

use crate::schema::FieldDoc;

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
  pub schema_version: u32,
  pub space:          String,
  pub field:          FieldDoc,
  pub dimension:      usize,
  pub lower:          usize,
  pub upper:          usize,
  pub exact:          bool,
  pub route:          String,
  pub ring:           RingDoc,
  pub steps:          Vec<StepDoc>,
  pub refusals:       Vec<RefusalDoc>,
  pub search:         SearchDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
  /// `H*(X)` is the graded tensor product of these, in order.
  pub factors:        Vec<FactorTable>,
  pub marked_classes: Vec<MarkedDoc>,
}

/// Structure constants of one factor; products with the unit are implicit
/// and pairs absent from both lists are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorTable {
  pub dims:     Vec<usize>,
  pub labels:   Vec<String>,
  pub products: Vec<TableEntry>,
  pub unknown:  Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
  pub left:  usize,
  pub right: usize,
  pub value: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
  pub index:       Vec<usize>,
  pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedDoc {
  pub name:        String,
  pub degree:      usize,
  pub tag:         String,
  pub atoroidal:   bool,
  pub coordinates: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
  pub rule:    String,
  pub subject: String,
  pub inputs:  Vec<String>,
  pub outputs: Vec<String>,
  #[serde(default, skip_serializing_if = "Option::is_none")]
  pub bound:   Option<usize>,
  #[serde(default, skip_serializing_if = "Option::is_none")]
  pub witness: Option<WitnessDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessDoc {
  /// `∏ factors` is nonzero in `H*(X) ⊗ H*(X)` and equals `value`.
  Product { factors: Vec<FactorDoc>, value: Vec<TermDoc>, weight: usize },
  Theorem {
    n:                     usize,
    classes:               Vec<String>,
    class_product:         Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component_coefficient: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component_matches:     Option<bool>,
  },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorDoc {
  /// `(1⊗u − u⊗1)^exponent` for a marked class.
  Class { class: String, exponent: u32 },
  /// `1⊗x − x⊗1` for a basis element of `H*(X)`.
  Basis { index: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefusalDoc {
  pub rule:    String,
  pub subject: String,
  pub reason:  String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchDoc {
  pub depth:        usize,
  pub weighted:     SearchReportDoc,
  pub zero_divisor: SearchReportDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchReportDoc {
  pub work:          u64,
  pub explored:      u64,
  pub unknown_skips: u64,
  pub capped:        bool,
  pub skipped:       bool,
}

impl From<&SearchReport> for SearchReportDoc {
  fn from(r: &SearchReport) -> Self {
    Self { work: r.work, explored: r.explored, unknown_skips: r.unknown_skips, capped: r.capped, skipped: r.skipped }
  }
}

fn terms(alg: &GradedAlgebra, v: &Sparse) -> Vec<TermDoc> {
  v.iter().map(|(i, c)| TermDoc { index: alg.multi_index(*i), coefficient: c.to_string() }).collect()
}

fn factor_table(a: &GradedAlgebra) -> Result<FactorTable, RingError> {
  let mut products = Vec::new();
  let mut unknown = Vec::new();
  for i in 1..a.len() {
    for j in 1..a.len() {
      if a.degree_of(i) + a.degree_of(j) > a.top_degree() {
        continue;
      }
      match a.mul_basis(i, j) {
        Ok(v) if v.is_empty() => {},
        Ok(v) => products.push(TableEntry { left: i, right: j, value: v.iter().map(|(k, c)| (*k, c.to_string())).collect() }),
        Err(RingError::UnknownProduct { .. }) => unknown.push([i, j]),
        Err(e) => return Err(e),
      }
    }
  }
  Ok(FactorTable { dims: a.dims().to_vec(), labels: a.labels().to_vec(), products, unknown })
}

fn product_doc(cert: &Certificate, p: &ProductWitness) -> WitnessDoc {
  WitnessDoc::Product {
    factors: p
      .factors
      .iter()
      .map(|f| match f {
        WitnessFactor::Atoroidal { class, exponent } => FactorDoc::Class { class: class.clone(), exponent: *exponent },
        WitnessFactor::ZeroDivisor { basis } => FactorDoc::Basis { index: cert.ring.multi_index(*basis) },
      })
      .collect(),
    value:   terms(&cert.square, &p.value),
    weight:  p.weight,
  }
}

/// Structure tables of the leaf factors of `ring`.
pub fn factor_tables(ring: &Arc<GradedAlgebra>) -> Result<Vec<FactorTable>, RingError> {
  ring.leaf_factors().iter().map(|f| factor_table(f)).collect()
}

impl CertificateDoc {
  pub fn from_certificate(cert: &Certificate) -> Result<Self, RingError> {
    let factors = factor_tables(&cert.ring)?;
    let marked_classes = cert
      .ring
      .marked()
      .iter()
      .map(|m| MarkedDoc {
        name:        m.name.clone(),
        degree:      m.degree,
        tag:         m.tag.as_str().into(),
        atoroidal:   m.tag.is_atoroidal(),
        coordinates: terms(&cert.ring, &m.coords),
      })
      .collect();
    let steps = cert
      .steps
      .iter()
      .map(|s| StepDoc {
        rule:    s.rule.as_str().into(),
        subject: s.subject.clone(),
        inputs:  s.inputs.clone(),
        outputs: s.outputs.clone(),
        bound:   s.bound,
        witness: s.witness.as_ref().map(|w| match w {
          Witness::Product(p) => product_doc(cert, p),
          Witness::Theorem(t) => WitnessDoc::Theorem {
            n:                     t.n,
            classes:               t.classes.clone(),
            class_product:         terms(&cert.ring, &t.class_product),
            component_coefficient: t.component_check.as_ref().map(|c| c.coefficient.to_string()),
            component_matches:     t.component_check.as_ref().map(|c| c.matches),
          },
        }),
      })
      .collect();
    Ok(Self {
      schema_version: CERTIFICATE_SCHEMA_VERSION,
      space: cert.space.clone(),
      field: FieldDoc { characteristic: cert.field.characteristic() },
      dimension: cert.dimension,
      lower: cert.lower,
      upper: cert.upper,
      exact: cert.exact,
      route: cert.route.as_str().into(),
      ring: RingDoc { factors, marked_classes },
      steps,
      refusals: cert
        .refusals
        .iter()
        .map(|r| RefusalDoc { rule: r.rule.as_str().into(), subject: r.subject.clone(), reason: r.reason.clone() })
        .collect(),
      search: SearchDoc {
        depth:        cert.depth,
        weighted:     (&cert.weighted).into(),
        zero_divisor: (&cert.zero_div).into(),
      },
    })
  }

  pub fn to_json(&self) -> String {
    let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
    s.push('\n');
    s
  }

  pub fn from_json(text: &str) -> Result<Self, serde_json::Error> { serde_json::from_str(text) }
}
