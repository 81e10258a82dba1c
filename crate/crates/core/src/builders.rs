//! Spaces: simplicial complexes, presentation complexes, raw complexes or
//! algebras, and finite products, together with the topological hypotheses a
//! user asserts about them.
//!
//! Group-theoretic facts (no ℤ² subgroup, torsion-freeness, asphericity of a
//! one-relator complex, ...) are never decided here. They are carried as
//! flags with a free-text provenance note and consumed by the certificate
//! engine.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::chain::{ChainComplexData, IntMatrix};
use crate::error::BuildError;
use crate::field::FieldSpec;
use crate::ring::{self, AlgebraBuilder, ClassTag, GradedAlgebra, MarkedClass, Sparse};
use crate::simplicial::{self, SimplicialComplex};

/// `⟨x_1, …, x_n | r_1, …⟩`; lowercase letters are generators, uppercase their inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
  generators: Vec<char>,
  relators:   Vec<String>,
}

impl GroupPresentation {
  pub fn new<S: AsRef<str>>(generators: &[S], relators: &[S]) -> Result<Self, BuildError> {
    let mut gens = Vec::with_capacity(generators.len());
    for g in generators {
      let g = g.as_ref();
      let mut chars = g.chars();
      let (Some(c), None) = (chars.next(), chars.next()) else {
        return Err(BuildError::BadGenerator(g.to_string()));
      };
      if !c.is_ascii_lowercase() {
        return Err(BuildError::BadGenerator(g.to_string()));
      }
      if gens.contains(&c) {
        return Err(BuildError::DuplicateGenerator(g.to_string()));
      }
      gens.push(c);
    }
    if gens.is_empty() {
      return Err(BuildError::NoGenerators);
    }
    let relators: Vec<String> = relators.iter().map(|r| r.as_ref().to_string()).collect();
    for r in &relators {
      if let Some(letter) = r.chars().find(|c| !gens.contains(&c.to_ascii_lowercase()) || !c.is_ascii_alphabetic()) {
        return Err(BuildError::UndeclaredLetter { relator: r.clone(), letter });
      }
    }
    Ok(Self { generators: gens, relators })
  }

  pub fn generators(&self) -> &[char] { &self.generators }

  pub fn relators(&self) -> &[String] { &self.relators }

  /// Exponent sum of each generator in `word`.
  pub fn exponent_sums(&self, word: &str) -> Vec<i64> {
    let mut sums = vec![0; self.generators.len()];
    for c in word.chars() {
      let i = self.generators.iter().position(|&g| g == c.to_ascii_lowercase()).expect("validated letter");
      sums[i] += if c.is_ascii_lowercase() { 1 } else { -1 };
    }
    sums
  }

  /// One 0-cell, a 1-cell per generator, a 2-cell per relator; `∂_1 = 0`, `∂_2` = exponent sums.
  pub fn chain_complex(&self) -> ChainComplexData {
    let n = self.generators.len();
    let mut d2 = IntMatrix::zeros(n, self.relators.len());
    for (j, r) in self.relators.iter().enumerate() {
      for (i, s) in self.exponent_sums(r).into_iter().enumerate() {
        d2.set(i, j, s);
      }
    }
    let labels = vec![
      vec!["*".to_string()],
      self.generators.iter().map(|c| c.to_string()).collect(),
      self.relators.clone(),
    ];
    ChainComplexData::new(vec![1, n, self.relators.len()], vec![IntMatrix::zeros(1, n), d2])
      .expect("presentation complex is a chain complex")
      .with_labels(labels)
  }
}

/// Hypotheses asserted by the user, each with an optional provenance note.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssertionSet {
  pub two_aspherical:     bool,
  pub pi1_no_z2:          bool,
  pub pi1_torsion_free:   bool,
  pub aspherical_space:   bool,
  pub atoroidal_classes:  Vec<String>,
  pub aspherical_classes: Vec<String>,
  pub provenance:         BTreeMap<String, String>,
}

impl AssertionSet {
  /// Applies `aspherical_space ⇒ two_aspherical`.
  pub fn normalized(mut self) -> Self {
    if self.aspherical_space && !self.two_aspherical {
      self.two_aspherical = true;
      self.provenance.entry("two_aspherical".into()).or_insert_with(|| "implied by aspherical_space".into());
    }
    self
  }

  /// All flags of the standard surface-group situation.
  pub fn surface_group(note: &str) -> Self {
    let mut provenance = BTreeMap::new();
    for key in ["aspherical_space", "pi1_no_z2", "pi1_torsion_free"] {
      provenance.insert(key.to_string(), note.to_string());
    }
    Self {
      aspherical_space: true,
      pi1_no_z2: true,
      pi1_torsion_free: true,
      provenance,
      ..Self::default()
    }
    .normalized()
  }

  pub fn note(&self, flag: &str) -> &str { self.provenance.get(flag).map_or("user assertion", String::as_str) }

  /// Conservative combination for `X_1 × ⋯ × X_n`.
  fn for_product(factors: &[Space]) -> Self {
    let all = |f: fn(&AssertionSet) -> bool| factors.iter().all(|s| f(&s.assertions));
    let mut out = Self {
      two_aspherical: all(|a| a.two_aspherical),
      aspherical_space: all(|a| a.aspherical_space),
      pi1_torsion_free: all(|a| a.pi1_torsion_free),
      // ℤ² embeds in any product of two infinite groups; never inherit.
      pi1_no_z2: factors.len() == 1 && factors[0].assertions.pi1_no_z2,
      ..Self::default()
    };
    for (flag, set) in [
      ("two_aspherical", out.two_aspherical),
      ("aspherical_space", out.aspherical_space),
      ("pi1_torsion_free", out.pi1_torsion_free),
    ] {
      if set {
        out.provenance.insert(flag.into(), "holds for every factor".into());
      }
    }
    out
  }
}

/// How a marked class is located in its cohomology group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassCoords {
  /// The unique basis element; requires the group to be one-dimensional.
  Generator,
  /// Coordinates in the cohomology basis, reduced into the field on use.
  Coordinates(Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec {
  pub name:   String,
  pub degree: usize,
  pub coords: ClassCoords,
}

impl ClassSpec {
  pub fn generator(name: &str, degree: usize) -> Self {
    Self { name: name.into(), degree, coords: ClassCoords::Generator }
  }
}

#[derive(Clone, Debug)]
pub enum Construction {
  Simplicial(SimplicialComplex),
  Presentation { presentation: GroupPresentation, complex: ChainComplexData },
  ChainComplex(ChainComplexData),
  /// A user-supplied ring, valid only over its own field.
  Algebra(Arc<GradedAlgebra>),
  Product(Vec<Space>),
}

/// A finite complex (or a stand-in for one) plus its asserted hypotheses.
#[derive(Clone, Debug)]
pub struct Space {
  name:         String,
  construction: Construction,
  dimension:    usize,
  assertions:   AssertionSet,
  marked:       Vec<ClassSpec>,
}

impl Space {
  fn from_parts(name: &str, construction: Construction, dimension: usize) -> Self {
    Self { name: name.into(), construction, dimension, assertions: AssertionSet::default(), marked: Vec::new() }
  }

  pub fn simplicial(name: &str, sc: SimplicialComplex) -> Self {
    let d = sc.dimension();
    Self::from_parts(name, Construction::Simplicial(sc), d)
  }

  pub fn chain_complex(name: &str, cc: ChainComplexData) -> Self {
    let d = cc.dimension();
    Self::from_parts(name, Construction::ChainComplex(cc), d)
  }

  pub fn algebra(name: &str, algebra: GradedAlgebra) -> Self {
    let d = algebra.top_degree();
    Self::from_parts(name, Construction::Algebra(Arc::new(algebra)), d)
  }

  pub fn with_assertions(mut self, assertions: AssertionSet) -> Self {
    self.assertions = assertions.normalized();
    self
  }

  pub fn with_marked(mut self, marked: Vec<ClassSpec>) -> Self {
    self.marked = marked;
    self
  }

  pub fn renamed(mut self, name: &str) -> Self {
    self.name = name.into();
    self
  }

  pub fn name(&self) -> &str { &self.name }

  pub fn construction(&self) -> &Construction { &self.construction }

  pub fn dimension(&self) -> usize { self.dimension }

  pub fn assertions(&self) -> &AssertionSet { &self.assertions }

  pub fn marked_specs(&self) -> &[ClassSpec] { &self.marked }

  pub fn factors(&self) -> Option<&[Space]> {
    match &self.construction {
      Construction::Product(f) => Some(f),
      _ => None,
    }
  }

  /// `dim H^k(X; field)` for every degree.
  pub fn betti_profile(&self, field: FieldSpec) -> Result<Vec<usize>, BuildError> {
    Ok(match &self.construction {
      Construction::Simplicial(sc) => sc.to_chain_complex().betti_profile(field),
      Construction::Presentation { complex, .. } | Construction::ChainComplex(complex) => complex.betti_profile(field),
      _ => self.unmarked_ring(field)?.dims().to_vec(),
    })
  }

  pub fn euler_characteristic(&self, field: FieldSpec) -> Result<i64, BuildError> {
    Ok(
      self
        .betti_profile(field)?
        .iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum(),
    )
  }

  fn unmarked_ring(&self, field: FieldSpec) -> Result<Arc<GradedAlgebra>, BuildError> {
    Ok(match &self.construction {
      Construction::Simplicial(sc) => Arc::new(sc.cohomology_ring(field)?),
      Construction::Presentation { complex, .. } | Construction::ChainComplex(complex) =>
        Arc::new(additive_ring(complex, field)?),
      Construction::Algebra(a) => {
        if a.field() != field {
          return Err(BuildError::FieldMismatch { expected: a.field().to_string(), requested: field.to_string() });
        }
        Arc::new(GradedAlgebra::clone(a).with_marked(Vec::new())?)
      },
      Construction::Product(factors) => {
        let mut acc = factors[0].unmarked_ring(field)?;
        for f in &factors[1..] {
          acc = ring::tensor(&acc, &f.unmarked_ring(field)?)?;
        }
        acc
      },
    })
  }

  /// Resolves this space's own marked classes (not those of product factors) in `ring`.
  pub fn resolve_marked(&self, ring: &GradedAlgebra) -> Result<Vec<MarkedClass>, BuildError> {
    let field = ring.field();
    let mut out = Vec::new();
    for spec in &self.marked {
      let err = |reason: String| BuildError::MarkedClass { name: spec.name.clone(), reason };
      let range = ring.degree_range(spec.degree);
      let coords: Sparse = match &spec.coords {
        ClassCoords::Generator => {
          if range.len() != 1 {
            return Err(err(format!("'generator' needs dim H^{} = 1, found {}", spec.degree, range.len())));
          }
          vec![(range.start, field.one())]
        },
        ClassCoords::Coordinates(v) => {
          if v.len() != range.len() {
            return Err(err(format!("{} coordinates for dim H^{} = {}", v.len(), spec.degree, range.len())));
          }
          let mut sparse = Vec::new();
          for (i, q) in range.clone().zip(v) {
            let s = field.from_rational(q)?;
            if !s.is_zero() {
              sparse.push((i, s));
            }
          }
          sparse
        },
      };
      if coords.is_empty() {
        return Err(err("class is zero".into()));
      }
      let tag = if self.assertions.atoroidal_classes.contains(&spec.name) {
        ClassTag::UserAtoroidal
      } else {
        ClassTag::Plain
      };
      out.push(MarkedClass { name: spec.name.clone(), degree: spec.degree, coords, tag });
    }
    Ok(out)
  }

  /// `H*(X; field)` with marked classes attached. Product factors contribute
  /// pullbacks of their own marked classes.
  pub fn cohomology_ring(&self, field: FieldSpec) -> Result<Arc<GradedAlgebra>, BuildError> {
    match &self.construction {
      Construction::Product(factors) => {
        let rings = factors.iter().map(|f| f.cohomology_ring(field)).collect::<Result<Vec<_>, _>>()?;
        pullback_ring(&rings)
      },
      _ => {
        let ring = self.unmarked_ring(field)?;
        let marked = self.resolve_marked(&ring)?;
        Ok(Arc::new(GradedAlgebra::clone(&ring).with_marked(marked)?))
      },
    }
  }
}

/// Additive cohomology with the unit; every product between positive degrees
/// that could be nonzero is left unknown.
pub fn additive_ring(cc: &ChainComplexData, field: FieldSpec) -> Result<GradedAlgebra, BuildError> {
  let dims = cc.betti_profile(field);
  if dims.first() != Some(&1) {
    return Err(BuildError::Ring(crate::error::RingError::Invalid(format!(
      "complex must be connected, dim H^0 = {}",
      dims.first().copied().unwrap_or(0)
    ))));
  }
  let mut labels = Vec::new();
  for (k, &d) in dims.iter().enumerate() {
    for i in 0..d {
      labels.push(if k == 0 { "1".to_string() } else { format!("h{k}_{i}") });
    }
  }
  let offsets: Vec<usize> = dims.iter().scan(0, |acc, d| {
    let o = *acc;
    *acc += d;
    Some(o)
  }).collect();
  let top = dims.iter().rposition(|&d| d > 0).unwrap_or(0);
  let mut builder = AlgebraBuilder::new(field, dims.clone()).labels(labels);
  for p in 1..=top {
    for q in 1..=top.saturating_sub(p) {
      if dims[p + q] == 0 {
        continue;
      }
      for i in 0..dims[p] {
        for j in 0..dims[q] {
          builder.unknown(offsets[p] + i, offsets[q] + j);
        }
      }
    }
  }
  Ok(builder.build()?)
}

/// `H*(X_1) ⊗ ⋯ ⊗ H*(X_n)` with each factor's marked class `v` pulled back to
/// `v_i = 1 ⊗ ⋯ ⊗ v ⊗ ⋯ ⊗ 1` (named `{v}_{i}`, 1-based). Atoroidal factor
/// classes become [`ClassTag::PullbackAtoroidal`].
pub fn pullback_ring(factors: &[Arc<GradedAlgebra>]) -> Result<Arc<GradedAlgebra>, BuildError> {
  let Some(first) = factors.first() else {
    return Err(BuildError::EmptyProduct);
  };
  if factors.len() == 1 {
    return Ok(Arc::clone(first));
  }
  let mut acc = Arc::clone(first);
  for f in &factors[1..] {
    acc = ring::tensor(&acc, f)?;
  }
  let leaves = acc.leaf_factors();
  // multi-index -> basis index of the full product
  let lookup: BTreeMap<Vec<usize>, usize> = (0..acc.len()).map(|i| (acc.multi_index(i), i)).collect();
  let mut marked = Vec::new();
  for (f, ring) in factors.iter().enumerate() {
    // a factor may itself be a product; find its leaf span
    let start: usize = factors[..f].iter().map(|r| r.leaf_factors().len()).sum();
    let width = ring.leaf_factors().len();
    debug_assert!(start + width <= leaves.len());
    for m in ring.marked() {
      let mut coords = Vec::new();
      for (i, c) in &m.coords {
        let mut idx = vec![0; leaves.len()];
        idx[start..start + width].copy_from_slice(&ring.multi_index(*i));
        coords.push((lookup[&idx], c.clone()));
      }
      coords.sort_by_key(|(k, _)| *k);
      let tag = if m.tag.is_atoroidal() { ClassTag::PullbackAtoroidal } else { ClassTag::Plain };
      marked.push(MarkedClass { name: format!("{}_{}", m.name, f + 1), degree: m.degree, coords, tag });
    }
  }
  Ok(Arc::new(GradedAlgebra::clone(&acc).with_marked(marked)?))
}

/// `X_1 × ⋯ × X_n`; a single factor is returned unchanged.
pub fn product(spaces: Vec<Space>) -> Result<Space, BuildError> {
  match spaces.len() {
    0 => Err(BuildError::EmptyProduct),
    1 => Ok(spaces.into_iter().next().expect("one space")),
    _ => {
      let name = spaces.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(" x ");
      let dimension = spaces.iter().map(|s| s.dimension).sum();
      let assertions = AssertionSet::for_product(&spaces);
      Ok(Space { name, construction: Construction::Product(spaces), dimension, assertions, marked: Vec::new() })
    },
  }
}

/// Presentation complex of `p`; dimension 2 when there are relators, else 1.
pub fn presentation_complex(name: &str, p: GroupPresentation) -> Space {
  let complex = p.chain_complex();
  let dimension = if p.relators().is_empty() { 1 } else { 2 };
  Space::from_parts(name, Construction::Presentation { presentation: p, complex }, dimension)
}

/// One of the bundled triangulations (see [`simplicial::BUNDLED_NAMES`]).
pub fn bundled(name: &str) -> Result<Space, BuildError> { Ok(Space::simplicial(name, simplicial::fixture(name)?)) }
