//! JSON input documents describing a space, its field and asserted hypotheses.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use tcweight_core::builders::{self, AssertionSet, ClassCoords, ClassSpec, GroupPresentation, Space};
use tcweight_core::chain::{ChainComplexData, IntMatrix};
use tcweight_core::field::FieldSpec;
use tcweight_core::ring::AlgebraBuilder;
use tcweight_core::simplicial::SimplicialComplex;

use crate::error::CliError;

pub const SPACE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
  pub schema_version: u32,
  pub field:          FieldDoc,
  pub space:          SpaceSpec,
  #[serde(default)]
  pub assertions:     AssertionsDoc,
  #[serde(default)]
  pub marked_classes: Vec<MarkedClassDoc>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
  pub characteristic: u64,
}

/// A factor of a product: a space with its own hypotheses and marked classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
  pub space:          SpaceSpec,
  #[serde(default)]
  pub assertions:     AssertionsDoc,
  #[serde(default)]
  pub marked_classes: Vec<MarkedClassDoc>,
  /// Number of copies of this factor.
  #[serde(default = "one")]
  pub copies:         usize,
}

fn one() -> usize { 1 }

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpaceSpec {
  /// One of the built-in triangulations.
  Bundled(BundledSpec),
  Simplicial(SimplicialSpec),
  Presentation(PresentationSpec),
  ChainComplex(ChainComplexSpec),
  Algebra(AlgebraSpec),
  Product(ProductSpec),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundledSpec {
  pub name: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialSpec {
  pub name:     String,
  pub vertices: usize,
  pub facets:   Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
  pub name:       String,
  pub generators: Vec<String>,
  pub relators:   Vec<String>,
}

/// Cellular chain complex; `boundaries[k - 1]` is the matrix of `∂_k` (rows index `(k-1)`-cells).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainComplexSpec {
  pub name:       String,
  pub dims:       Vec<usize>,
  pub boundaries: Vec<Vec<Vec<i64>>>,
}

/// Cohomology ring given by structure constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
  pub name:     String,
  pub dims:     Vec<usize>,
  #[serde(default)]
  pub labels:   Option<Vec<String>>,
  #[serde(default)]
  pub products: Vec<ProductDoc>,
  #[serde(default)]
  pub unknown:  Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
  #[serde(default)]
  pub name:    Option<String>,
  pub factors: Vec<FactorDoc>,
}

// Errors raised below a tagged union carry their relative path before this
// separator so `parse_document` can splice it onto the outer one.
const PATH_SEP: char = '\u{0}';

fn variant<'de, T: Deserialize<'de>, E: serde::de::Error>(v: serde_json::Value) -> Result<T, E> {
  serde_path_to_error::deserialize(v).map_err(|e| {
    let inner = e.inner().to_string();
    let (rest, message) = inner.split_once(PATH_SEP).unwrap_or(("", &inner));
    let path = e.path().to_string();
    let path = match (path.as_str(), rest) {
      (".", r) => r.to_string(),
      (p, "") => p.to_string(),
      (p, r) => format!("{p}.{r}"),
    };
    E::custom(format!("{path}{PATH_SEP}{message}"))
  })
}

impl<'de> Deserialize<'de> for SpaceSpec {
  fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
    use serde::de::Error;
    let mut map = serde_json::Map::deserialize(d)?;
    let tag = match map.remove("type") {
      Some(serde_json::Value::String(s)) => s,
      Some(_) => return Err(D::Error::custom(format!("type{PATH_SEP}expected a string"))),
      None => return Err(D::Error::missing_field("type")),
    };
    let v = serde_json::Value::Object(map);
    Ok(match tag.as_str() {
      "bundled" => Self::Bundled(variant(v)?),
      "simplicial" => Self::Simplicial(variant(v)?),
      "presentation" => Self::Presentation(variant(v)?),
      "chain_complex" => Self::ChainComplex(variant(v)?),
      "algebra" => Self::Algebra(variant(v)?),
      "product" => Self::Product(variant(v)?),
      other => {
        return Err(D::Error::custom(format!(
          "type{PATH_SEP}unknown space type {other:?}, expected one of bundled, simplicial, presentation, chain_complex, algebra, product"
        )))
      },
    })
  }
}

/// `e_left · e_right = Σ coefficient · e_index`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
  pub left:  usize,
  pub right: usize,
  pub value: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssertionsDoc {
  pub two_aspherical:     bool,
  pub pi1_no_z2:          bool,
  pub pi1_torsion_free:   bool,
  pub aspherical_space:   bool,
  pub atoroidal_classes:  Vec<String>,
  pub aspherical_classes: Vec<String>,
  /// Free-text justification per flag.
  pub provenance:         BTreeMap<String, String>,
}

impl From<&AssertionsDoc> for AssertionSet {
  fn from(d: &AssertionsDoc) -> Self {
    AssertionSet {
      two_aspherical:     d.two_aspherical,
      pi1_no_z2:          d.pi1_no_z2,
      pi1_torsion_free:   d.pi1_torsion_free,
      aspherical_space:   d.aspherical_space,
      atoroidal_classes:  d.atoroidal_classes.clone(),
      aspherical_classes: d.aspherical_classes.clone(),
      provenance:         d.provenance.clone(),
    }
  }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedClassDoc {
  pub name:        String,
  #[serde(default = "two")]
  pub degree:      usize,
  pub coordinates: CoordinatesDoc,
}

fn two() -> usize { 2 }

/// `"generator"` or a list of exact scalars such as `"1"`, `"-3/2"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordinatesDoc {
  Shorthand(String),
  Explicit(Vec<String>),
}

/// Parses a document, reporting the JSON path of the first problem.
pub fn parse_document(text: &str) -> Result<SpaceDocument, CliError> {
  let de = &mut serde_json::Deserializer::from_str(text);
  let doc: SpaceDocument = serde_path_to_error::deserialize(de).map_err(|e| {
    let inner = e.inner().to_string();
    match inner.split_once(PATH_SEP) {
      Some((rest, message)) => CliError::Schema { path: format!("{}.{rest}", e.path()), message: message.to_string() },
      None => {
        let path = match e.path().to_string() {
          p if p == "?" || p == "." => "<document>".to_string(),
          p => p,
        };
        CliError::Schema { path, message: inner }
      },
    }
  })?;
  if doc.schema_version != SPACE_SCHEMA_VERSION {
    return Err(CliError::Schema {
      path:    "schema_version".into(),
      message: format!("unsupported schema version {} (expected {SPACE_SCHEMA_VERSION})", doc.schema_version),
    });
  }
  Ok(doc)
}

impl SpaceDocument {
  /// The document's field, or `characteristic` when given.
  pub fn field(&self, characteristic: Option<u64>) -> Result<FieldSpec, CliError> {
    let c = characteristic.unwrap_or(self.field.characteristic);
    FieldSpec::new(c).map_err(|e| CliError::Schema { path: "field.characteristic".into(), message: e.to_string() })
  }

  pub fn to_space(&self, field: FieldSpec) -> Result<Space, CliError> {
    build_space(&self.space, &self.assertions, &self.marked_classes, field, "space")
  }
}

fn at(path: &str) -> impl Fn(String) -> CliError + '_ {
  move |message| CliError::Schema { path: path.to_string(), message }
}

fn build_space(
  spec: &SpaceSpec,
  assertions: &AssertionsDoc,
  marked: &[MarkedClassDoc],
  field: FieldSpec,
  path: &str,
) -> Result<Space, CliError> {
  let err = at(path);
  let base = match spec {
    SpaceSpec::Bundled(BundledSpec { name }) => builders::bundled(name).map_err(|e| err(e.to_string()))?,
    SpaceSpec::Simplicial(SimplicialSpec { name, vertices, facets }) => {
      let sc = SimplicialComplex::new(*vertices, facets.clone()).map_err(|e| at(&format!("{path}.facets"))(e.to_string()))?;
      Space::simplicial(name, sc)
    },
    SpaceSpec::Presentation(PresentationSpec { name, generators, relators }) => {
      let p = GroupPresentation::new(generators, relators).map_err(|e| err(e.to_string()))?;
      builders::presentation_complex(name, p)
    },
    SpaceSpec::ChainComplex(ChainComplexSpec { name, dims, boundaries }) => {
      let mats = boundaries
        .iter()
        .enumerate()
        .map(|(k, rows)| {
          let here_path = format!("{path}.boundaries[{k}]");
          let here = at(&here_path);
          let (Some(&r), Some(&cols)) = (dims.get(k), dims.get(k + 1)) else {
            return Err(here(format!("expected {} boundary matrices", dims.len().saturating_sub(1))));
          };
          if rows.len() != r || rows.iter().any(|row| row.len() != cols) {
            return Err(here(format!("expected a {r} x {cols} matrix")));
          }
          Ok(IntMatrix::from_rows(rows, cols))
        })
        .collect::<Result<Vec<_>, _>>()?;
      let cc = ChainComplexData::new(dims.clone(), mats).map_err(|e| err(e.to_string()))?;
      Space::chain_complex(name, cc)
    },
    SpaceSpec::Algebra(AlgebraSpec { name, dims, labels, products, unknown }) => {
      let mut b = AlgebraBuilder::new(field, dims.clone());
      if let Some(l) = labels {
        b = b.labels(l.clone());
      }
      for (i, p) in products.iter().enumerate() {
        let value = p
          .value
          .iter()
          .map(|(k, s)| field.parse_scalar(s).map(|c| (*k, c)))
          .collect::<Result<Vec<_>, _>>()
          .map_err(|e| at(&format!("{path}.products[{i}]"))(e.to_string()))?;
        b.product(p.left, p.right, value);
      }
      for &[i, j] in unknown {
        b.unknown(i, j);
      }
      Space::algebra(name, b.build().map_err(|e| err(e.to_string()))?)
    },
    SpaceSpec::Product(ProductSpec { name, factors }) => {
      let mut spaces = Vec::new();
      for (i, f) in factors.iter().enumerate() {
        let sub = format!("{path}.factors[{i}]");
        if f.copies == 0 {
          return Err(at(&sub)("copies must be positive".into()));
        }
        let s = build_space(&f.space, &f.assertions, &f.marked_classes, field, &format!("{sub}.space"))?;
        spaces.extend(std::iter::repeat_n(s, f.copies));
      }
      let product = builders::product(spaces).map_err(|e| err(e.to_string()))?;
      match name {
        Some(n) => product.renamed(n),
        None => product,
      }
    },
  };
  let specs = marked
    .iter()
    .enumerate()
    .map(|(i, m)| {
      let coords = match &m.coordinates {
        CoordinatesDoc::Shorthand(s) if s == "generator" => ClassCoords::Generator,
        CoordinatesDoc::Shorthand(s) => {
          return Err(at(&format!("marked_classes[{i}].coordinates"))(format!("expected \"generator\" or a list, found {s:?}")))
        },
        CoordinatesDoc::Explicit(v) => ClassCoords::Coordinates(
          v.iter()
            .map(|s| BigRational::from_str(s.trim()))
            .collect::<Result<_, _>>()
            .map_err(|e| at(&format!("marked_classes[{i}].coordinates"))(format!("{e}")))?,
        ),
      };
      Ok(ClassSpec { name: m.name.clone(), degree: m.degree, coords })
    })
    .collect::<Result<Vec<_>, _>>()?;
  if matches!(spec, SpaceSpec::Product(_)) {
    // hypotheses and classes of a product are derived from its factors
    if !assertions_empty(assertions) || !specs.is_empty() {
      return Err(err("declare assertions and marked classes on the factors of a product".into()));
    }
    return Ok(base);
  }
  Ok(base.with_assertions(assertions.into()).with_marked(specs))
}

fn assertions_empty(a: &AssertionsDoc) -> bool {
  !(a.two_aspherical || a.pi1_no_z2 || a.pi1_torsion_free || a.aspherical_space)
    && a.atoroidal_classes.is_empty()
    && a.aspherical_classes.is_empty()
}

#[cfg(test)]
mod tests {
  use super::*;

  const TORUS: &str = r#"{"schema_version": 1, "field": {"characteristic": 0}, "space": {"type": "bundled", "name": "torus"}}"#;

  #[test]
  fn parses_bundled() {
    let doc = parse_document(TORUS).unwrap();
    let space = doc.to_space(doc.field(None).unwrap()).unwrap();
    assert_eq!(space.betti_profile(FieldSpec::rationals()).unwrap(), vec![1, 2, 1]);
  }

  #[test]
  fn reports_paths() {
    let bad = r#"{"schema_version": 1, "field": {"characteristic": 0},
      "space": {"type": "simplicial", "name": "x", "vertices": 3, "facets": [[0, 1], [1, "two"]]}}"#;
    match parse_document(bad) {
      Err(CliError::Schema { path, .. }) => assert_eq!(path, "space.facets[1][1]"),
      other => panic!("{other:?}"),
    }
    let unsorted = r#"{"schema_version": 1, "field": {"characteristic": 0},
      "space": {"type": "simplicial", "name": "x", "vertices": 3, "facets": [[1, 0]]}}"#;
    let doc = parse_document(unsorted).unwrap();
    match doc.to_space(FieldSpec::rationals()) {
      Err(CliError::Schema { path, .. }) => assert_eq!(path, "space.facets"),
      other => panic!("{other:?}"),
    }
  }

  #[test]
  fn rejects_unknown_version_and_fields() {
    assert!(parse_document(&TORUS.replace("\"schema_version\": 1", "\"schema_version\": 9")).is_err());
    assert!(parse_document(&TORUS.replace("\"name\": \"torus\"", "\"name\": \"torus\", \"colour\": 1")).is_err());
  }

  #[test]
  fn product_copies_and_coordinates() {
    let doc = r#"{"schema_version": 1, "field": {"characteristic": 3},
      "space": {"type": "product", "factors": [{"space": {"type": "bundled", "name": "torus"}, "copies": 2,
        "marked_classes": [{"name": "w", "coordinates": ["1"]}]}]}}"#;
    let doc = parse_document(doc).unwrap();
    let space = doc.to_space(doc.field(None).unwrap()).unwrap();
    assert_eq!(space.dimension(), 4);
    let ring = space.cohomology_ring(FieldSpec::new(3).unwrap()).unwrap();
    assert!(ring.marked_class("w_2").is_some());
  }
}
