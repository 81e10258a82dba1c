//! Finite-dimensional graded-commutative algebras over a field.
//!
//! An algebra is either *explicit*, given by structure constants on a basis,
//! or a *tensor* `A ⊗ B` whose products are evaluated on demand from the
//! factors with the Koszul sign `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'`.
//! Tensor algebras are never materialized unless asked to, which keeps
//! `H*(X) ⊗ H*(X)` for products `X = X_1 × ⋯ × X_n` cheap to work in.
//!
//! Structure constants may be marked *unknown* (for instance `H^1 × H^1 → H^2`
//! of a presentation complex). Any product that actually needs such a constant
//! fails with [`RingError::UnknownProduct`]; products that vanish for grading
//! reasons, or because the other tensor side is already zero, never read it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::RingError;
use crate::field::{sign, FieldSpec, Scalar};
use crate::linalg::{self, Matrix};

/// Sparse coordinate vector: `(basis index, nonzero coefficient)`, sorted by index.
pub type Sparse = Vec<(usize, Scalar)>;

/// Above this basis size the associativity check is skipped by default.
pub const DEFAULT_ASSOCIATIVITY_LIMIT: usize = 48;

/// Provenance of a distinguished class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassTag {
  Plain,
  UserAtoroidal,
  PromotedAtoroidal,
  PullbackAtoroidal,
}

impl ClassTag {
  pub fn is_atoroidal(self) -> bool { !matches!(self, ClassTag::Plain) }

  pub fn as_str(self) -> &'static str {
    match self {
      ClassTag::Plain => "plain",
      ClassTag::UserAtoroidal => "user-asserted atoroidal",
      ClassTag::PromotedAtoroidal => "promoted atoroidal",
      ClassTag::PullbackAtoroidal => "atoroidal (pullback)",
    }
  }
}

/// A named element of an algebra, e.g. the class `u` of a symplectic-like space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedClass {
  pub name:   String,
  pub degree: usize,
  pub coords: Sparse,
  pub tag:    ClassTag,
}

#[derive(Clone, Debug)]
enum Structure {
  Explicit {
    // table[i * n + j]; `None` marks an unknown constant.
    table: Vec<Option<Sparse>>,
  },
  Tensor {
    left:  Arc<GradedAlgebra>,
    right: Arc<GradedAlgebra>,
    pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
  },
}

/// A graded-commutative algebra with a basis ordered by degree; basis element 0 is the unit.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
  field:     FieldSpec,
  dims:      Vec<usize>,
  degrees:   Vec<usize>,
  offsets:   Vec<usize>,
  labels:    Vec<String>,
  structure: Structure,
  marked:    Vec<MarkedClass>,
}

/// Collects structure constants for an explicit algebra.
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
  field:  FieldSpec,
  dims:   Vec<usize>,
  labels: Vec<String>,
  table:  BTreeMap<(usize, usize), Option<Sparse>>,
  associativity_limit: usize,
}

impl AlgebraBuilder {
  /// `dims[0]` must be 1; basis element 0 is the unit.
  pub fn new(field: FieldSpec, dims: Vec<usize>) -> Self {
    let n: usize = dims.iter().sum();
    let mut labels = Vec::with_capacity(n);
    let mut k = 0;
    for (d, &count) in dims.iter().enumerate() {
      for i in 0..count {
        labels.push(if d == 0 && i == 0 { "1".to_string() } else { format!("e{d}_{i}") });
        k += 1;
      }
    }
    debug_assert_eq!(k, n);
    Self { field, dims, labels, table: BTreeMap::new(), associativity_limit: DEFAULT_ASSOCIATIVITY_LIMIT }
  }

  pub fn labels(mut self, labels: Vec<String>) -> Self {
    self.labels = labels;
    self
  }

  pub fn associativity_limit(mut self, limit: usize) -> Self {
    self.associativity_limit = limit;
    self
  }

  /// Sets `e_i · e_j`; zero entries are dropped.
  pub fn product(&mut self, i: usize, j: usize, value: Sparse) -> &mut Self {
    let mut v: Sparse = value.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|(k, _)| *k);
    self.table.insert((i, j), Some(v));
    self
  }

  pub fn unknown(&mut self, i: usize, j: usize) -> &mut Self {
    self.table.insert((i, j), None);
    self
  }

  /// Builds and validates. Unit products are filled in when absent.
  pub fn build(self) -> Result<GradedAlgebra, RingError> {
    let n: usize = self.dims.iter().sum();
    if self.dims.first() != Some(&1) {
      return Err(RingError::Invalid("degree 0 must be one-dimensional".into()));
    }
    if self.labels.len() != n {
      return Err(RingError::Invalid(format!("{} labels for {} basis elements", self.labels.len(), n)));
    }
    let mut table = vec![Some(Vec::new()); n * n];
    for i in 0..n {
      table[i] = Some(vec![(i, self.field.one())]);
      table[i * n] = Some(vec![(i, self.field.one())]);
    }
    for ((i, j), v) in self.table {
      if i >= n || j >= n {
        return Err(RingError::Invalid(format!("product ({i}, {j}) outside basis of size {n}")));
      }
      if let Some(v) = &v {
        if v.iter().any(|(k, c)| *k >= n || !self.field.contains(c)) {
          return Err(RingError::Invalid(format!("product ({i}, {j}) has bad entries")));
        }
      }
      table[i * n + j] = v;
    }
    let alg = GradedAlgebra::assemble(self.field, self.dims, self.labels, Structure::Explicit { table });
    if let Structure::Explicit { table } = &alg.structure {
      for (k, entry) in table.iter().enumerate() {
        let (i, j) = (k / n, k % n);
        let d = alg.degrees[i] + alg.degrees[j];
        if matches!(entry, Some(v) if v.iter().any(|(t, _)| alg.degrees[*t] != d)) {
          return Err(RingError::Invalid(format!("{}·{} is not of degree {d}", alg.labels[i], alg.labels[j])));
        }
      }
    }
    alg.validate(self.associativity_limit)?;
    Ok(alg)
  }
}

impl GradedAlgebra {
  fn assemble(field: FieldSpec, dims: Vec<usize>, labels: Vec<String>, structure: Structure) -> Self {
    let mut degrees = Vec::new();
    let mut offsets = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    for (d, &count) in dims.iter().enumerate() {
      offsets.push(acc);
      degrees.extend(core::iter::repeat_n(d, count));
      acc += count;
    }
    offsets.push(acc);
    Self { field, dims, degrees, offsets, labels, structure, marked: Vec::new() }
  }

  /// The ground field as an algebra concentrated in degree 0.
  pub fn trivial(field: FieldSpec) -> Self {
    AlgebraBuilder::new(field, vec![1]).build().expect("trivial algebra is valid")
  }

  pub fn field(&self) -> FieldSpec { self.field }

  pub fn dims(&self) -> &[usize] { &self.dims }

  /// Total basis size.
  pub fn len(&self) -> usize { self.degrees.len() }

  pub fn is_empty(&self) -> bool { self.degrees.is_empty() }

  /// Highest degree with a nonzero basis.
  pub fn top_degree(&self) -> usize { self.dims.iter().rposition(|&d| d > 0).unwrap_or(0) }

  pub fn degree_of(&self, i: usize) -> usize { self.degrees[i] }

  pub fn label(&self, i: usize) -> &str { &self.labels[i] }

  pub fn labels(&self) -> &[String] { &self.labels }

  /// Basis indices of degree `d`.
  pub fn degree_range(&self, d: usize) -> core::ops::Range<usize> {
    if d >= self.dims.len() {
      return self.len()..self.len();
    }
    self.offsets[d]..self.offsets[d + 1]
  }

  pub fn is_tensor(&self) -> bool { matches!(self.structure, Structure::Tensor { .. }) }

  /// Factors `(A, B)` when this is `A ⊗ B`.
  pub fn tensor_factors(&self) -> Option<(&Arc<GradedAlgebra>, &Arc<GradedAlgebra>)> {
    match &self.structure {
      Structure::Tensor { left, right, .. } => Some((left, right)),
      Structure::Explicit { .. } => None,
    }
  }

  /// Basis pair `(a, b)` for basis element `i` of `A ⊗ B`.
  pub fn tensor_pair(&self, i: usize) -> Option<(usize, usize)> {
    match &self.structure {
      Structure::Tensor { pairs, .. } => Some(pairs[i]),
      Structure::Explicit { .. } => None,
    }
  }

  /// Basis index of `a ⊗ b`.
  pub fn tensor_index(&self, a: usize, b: usize) -> Option<usize> {
    match &self.structure {
      Structure::Tensor { right, index, .. } => Some(index[a * right.len() + b]),
      Structure::Explicit { .. } => None,
    }
  }

  /// The explicit algebras at the leaves of the tensor tree, left to right.
  pub fn leaf_factors(self: &Arc<Self>) -> Vec<Arc<GradedAlgebra>> {
    match &self.structure {
      Structure::Explicit { .. } => vec![Arc::clone(self)],
      Structure::Tensor { left, right, .. } => {
        let mut v = left.leaf_factors();
        v.extend(right.leaf_factors());
        v
      },
    }
  }

  /// Basis element `i` written as one basis index per leaf factor.
  pub fn multi_index(&self, i: usize) -> Vec<usize> {
    match &self.structure {
      Structure::Explicit { .. } => vec![i],
      Structure::Tensor { left, right, pairs, .. } => {
        let (a, b) = pairs[i];
        let mut v = left.multi_index(a);
        v.extend(right.multi_index(b));
        v
      },
    }
  }

  /// Structure constant lookup; `Ok(vec![])` means the product is zero.
  pub fn mul_basis(&self, i: usize, j: usize) -> Result<Sparse, RingError> {
    let d = self.degrees[i] + self.degrees[j];
    if d > self.top_degree() {
      return Ok(Vec::new());
    }
    match &self.structure {
      Structure::Explicit { table } => table[i * self.len() + j].clone().ok_or_else(|| RingError::UnknownProduct {
        left:  self.labels[i].clone(),
        right: self.labels[j].clone(),
      }),
      Structure::Tensor { left, right, pairs, index } => {
        let (a, b) = pairs[i];
        let (a2, b2) = pairs[j];
        // A zero on either side makes the unknown on the other irrelevant.
        let lhs = left.mul_basis(a, a2);
        if matches!(&lhs, Ok(v) if v.is_empty()) {
          return Ok(Vec::new());
        }
        let rhs = right.mul_basis(b, b2);
        if matches!(&rhs, Ok(v) if v.is_empty()) {
          return Ok(Vec::new());
        }
        let (lhs, rhs) = (lhs?, rhs?);
        let negative = (right.degree_of(b) * left.degree_of(a2)) % 2 == 1;
        let s = sign(self.field, negative);
        let nb = right.len();
        let mut out: Sparse = Vec::with_capacity(lhs.len() * rhs.len());
        for (x, c) in &lhs {
          let cs = c * &s;
          for (y, e) in &rhs {
            let v = &cs * e;
            if !v.is_zero() {
              out.push((index[x * nb + y], v));
            }
          }
        }
        out.sort_by_key(|(k, _)| *k);
        Ok(out)
      },
    }
  }

  /// Checks the unit, grading, graded commutativity and (below `associativity_limit`) associativity.
  pub fn validate(&self, associativity_limit: usize) -> Result<(), RingError> {
    let n = self.len();
    if self.dims.first() != Some(&1) {
      return Err(RingError::InvariantViolation("degree 0 is not spanned by the unit".into()));
    }
    let known = |i, j| self.mul_basis(i, j).ok();
    for i in 0..n {
      let unit = vec![(i, self.field.one())];
      if known(0, i).as_ref() != Some(&unit) || known(i, 0).as_ref() != Some(&unit) {
        return Err(RingError::InvariantViolation(format!("unit does not act as identity on {}", self.labels[i])));
      }
    }
    for i in 0..n {
      for j in 0..n {
        let Some(v) = known(i, j) else { continue };
        let d = self.degrees[i] + self.degrees[j];
        if v.iter().any(|(k, _)| self.degrees[*k] != d) {
          return Err(RingError::InvariantViolation(format!(
            "{}·{} leaves degree {d}",
            self.labels[i], self.labels[j]
          )));
        }
        if j < i {
          continue;
        }
        let Some(w) = known(j, i) else { continue };
        let negative = (self.degrees[i] * self.degrees[j]) % 2 == 1;
        let s = sign(self.field, negative);
        let w: Sparse = w.into_iter().map(|(k, c)| (k, c * s.clone())).collect();
        if v != w {
          return Err(RingError::InvariantViolation(format!(
            "graded commutativity fails for {} and {}",
            self.labels[i], self.labels[j]
          )));
        }
      }
    }
    if n <= associativity_limit {
      for i in 1..n {
        for j in 1..n {
          let Some(ij) = known(i, j) else { continue };
          for k in 1..n {
            let Some(jk) = known(j, k) else { continue };
            let (Ok(left), Ok(right)) = (self.apply_right(&ij, k), self.apply_left(i, &jk)) else {
              continue;
            };
            if left != right {
              return Err(RingError::InvariantViolation(format!(
                "associativity fails for ({}, {}, {})",
                self.labels[i], self.labels[j], self.labels[k]
              )));
            }
          }
        }
      }
    }
    Ok(())
  }

  fn apply_right(&self, x: &Sparse, k: usize) -> Result<Sparse, RingError> {
    let mut acc = BTreeMap::new();
    for (i, c) in x {
      for (t, e) in self.mul_basis(*i, k)? {
        accumulate(&mut acc, t, c * &e);
      }
    }
    Ok(finish(acc))
  }

  fn apply_left(&self, i: usize, y: &Sparse) -> Result<Sparse, RingError> {
    let mut acc = BTreeMap::new();
    for (j, c) in y {
      for (t, e) in self.mul_basis(i, *j)? {
        accumulate(&mut acc, t, c * &e);
      }
    }
    Ok(finish(acc))
  }

  pub fn marked(&self) -> &[MarkedClass] { &self.marked }

  pub fn marked_class(&self, name: &str) -> Option<&MarkedClass> { self.marked.iter().find(|m| m.name == name) }

  /// Replaces the marked classes.
  pub fn with_marked(mut self, marked: Vec<MarkedClass>) -> Result<Self, RingError> {
    for m in &marked {
      if m.coords.iter().any(|(i, c)| *i >= self.len() || self.degrees[*i] != m.degree || !self.field.contains(c)) {
        return Err(RingError::Invalid(format!("marked class {} is not a degree-{} element", m.name, m.degree)));
      }
    }
    self.marked = marked;
    Ok(self)
  }

  /// Copy with every product evaluated into an explicit table (unknowns stay unknown).
  pub fn to_explicit(&self) -> GradedAlgebra {
    let n = self.len();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
      for j in 0..n {
        table.push(self.mul_basis(i, j).ok());
      }
    }
    let mut out = Self::assemble(self.field, self.dims.clone(), self.labels.clone(), Structure::Explicit { table });
    out.marked = self.marked.clone();
    out
  }

  pub fn zero(self: &Arc<Self>) -> AlgebraElement { AlgebraElement { algebra: Arc::clone(self), terms: BTreeMap::new() } }

  pub fn unit(self: &Arc<Self>) -> AlgebraElement { self.basis_element(0) }

  pub fn basis_element(self: &Arc<Self>, i: usize) -> AlgebraElement {
    let mut terms = BTreeMap::new();
    terms.insert(i, self.field.one());
    AlgebraElement { algebra: Arc::clone(self), terms }
  }

  pub fn element(self: &Arc<Self>, coords: &[(usize, Scalar)]) -> AlgebraElement {
    let mut terms = BTreeMap::new();
    for (i, c) in coords {
      assert!(*i < self.len(), "basis index out of range");
      accumulate(&mut terms, *i, c.clone());
    }
    AlgebraElement { algebra: Arc::clone(self), terms }
  }

  /// Element with coordinates `coords` in degree `d`.
  pub fn element_in_degree(self: &Arc<Self>, d: usize, coords: &[Scalar]) -> Result<AlgebraElement, RingError> {
    let range = self.degree_range(d);
    if coords.len() != range.len() {
      return Err(RingError::InvalidDegree(d));
    }
    let sparse: Sparse = range.zip(coords.iter().cloned()).collect();
    Ok(self.element(&sparse))
  }

  pub fn marked_element(self: &Arc<Self>, name: &str) -> Option<AlgebraElement> {
    self.marked_class(name).map(|m| self.element(&m.coords))
  }
}

fn accumulate(acc: &mut BTreeMap<usize, Scalar>, k: usize, v: Scalar) {
  if v.is_zero() {
    return;
  }
  match acc.get_mut(&k) {
    Some(c) => {
      *c += &v;
      if c.is_zero() {
        acc.remove(&k);
      }
    },
    None => {
      acc.insert(k, v);
    },
  }
}

fn finish(acc: BTreeMap<usize, Scalar>) -> Sparse { acc.into_iter().collect() }

/// `A ⊗ B` with Koszul signs; basis ordered by total degree, then `(a, b)` lexicographically.
pub fn tensor(a: &Arc<GradedAlgebra>, b: &Arc<GradedAlgebra>) -> Result<Arc<GradedAlgebra>, RingError> {
  if a.field != b.field {
    return Err(RingError::FieldMismatch);
  }
  let top = a.dims.len() + b.dims.len() - 1;
  let mut dims = vec![0; top];
  let mut pairs = Vec::with_capacity(a.len() * b.len());
  let mut labels = Vec::with_capacity(a.len() * b.len());
  let mut index = vec![usize::MAX; a.len() * b.len()];
  for (d, slot) in dims.iter_mut().enumerate() {
    for i in 0..a.len() {
      let da = a.degrees[i];
      if da > d || d - da >= b.dims.len() {
        continue;
      }
      for j in b.degree_range(d - da) {
        index[i * b.len() + j] = pairs.len();
        pairs.push((i, j));
        labels.push(format!("{}⊗{}", a.labels[i], b.labels[j]));
        *slot += 1;
      }
    }
  }
  let structure = Structure::Tensor { left: Arc::clone(a), right: Arc::clone(b), pairs, index };
  Ok(Arc::new(GradedAlgebra::assemble(a.field, dims, labels, structure)))
}

/// An element of a specific algebra, stored sparsely.
#[derive(Clone)]
pub struct AlgebraElement {
  algebra: Arc<GradedAlgebra>,
  terms:   BTreeMap<usize, Scalar>,
}

impl PartialEq for AlgebraElement {
  fn eq(&self, other: &Self) -> bool { Arc::ptr_eq(&self.algebra, &other.algebra) && self.terms == other.terms }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "{self}") }
}

impl fmt::Display for AlgebraElement {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if self.terms.is_empty() {
      return write!(f, "0");
    }
    for (n, (i, c)) in self.terms.iter().enumerate() {
      if n > 0 {
        write!(f, " + ")?;
      }
      write!(f, "({c})·{}", self.algebra.labels[*i])?;
    }
    Ok(())
  }
}

impl AlgebraElement {
  pub fn algebra(&self) -> &Arc<GradedAlgebra> { &self.algebra }

  pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> { self.terms.iter().map(|(i, c)| (*i, c)) }

  pub fn sparse(&self) -> Sparse { self.terms.iter().map(|(i, c)| (*i, c.clone())).collect() }

  pub fn is_zero(&self) -> bool { self.terms.is_empty() }

  pub fn coefficient(&self, i: usize) -> Scalar {
    self.terms.get(&i).cloned().unwrap_or_else(|| self.algebra.field.zero())
  }

  /// Degree if homogeneous and nonzero.
  pub fn degree(&self) -> Option<usize> {
    let mut it = self.terms.keys().map(|&i| self.algebra.degrees[i]);
    let d = it.next()?;
    it.all(|e| e == d).then_some(d)
  }

  pub fn is_homogeneous(&self) -> bool { self.is_zero() || self.degree().is_some() }

  /// Dense coordinates of the degree-`d` component.
  pub fn component(&self, d: usize) -> Vec<Scalar> {
    self.algebra.degree_range(d).map(|i| self.coefficient(i)).collect()
  }

  /// Dense coordinates over the whole basis.
  pub fn coordinates(&self) -> Vec<Scalar> { (0..self.algebra.len()).map(|i| self.coefficient(i)).collect() }

  fn same_algebra(&self, other: &Self) -> Result<(), RingError> {
    if Arc::ptr_eq(&self.algebra, &other.algebra) { Ok(()) } else { Err(RingError::AlgebraMismatch) }
  }

  pub fn add(&self, other: &Self) -> Result<Self, RingError> {
    self.same_algebra(other)?;
    let mut terms = self.terms.clone();
    for (i, c) in &other.terms {
      accumulate(&mut terms, *i, c.clone());
    }
    Ok(Self { algebra: Arc::clone(&self.algebra), terms })
  }

  pub fn sub(&self, other: &Self) -> Result<Self, RingError> { self.add(&other.neg()) }

  pub fn neg(&self) -> Self { self.scale(&-self.algebra.field.one()) }

  pub fn scale(&self, s: &Scalar) -> Self {
    let mut terms = BTreeMap::new();
    for (i, c) in &self.terms {
      accumulate(&mut terms, *i, c * s);
    }
    Self { algebra: Arc::clone(&self.algebra), terms }
  }

  /// Bilinear extension of the structure constants.
  pub fn multiply(&self, other: &Self) -> Result<Self, RingError> {
    self.same_algebra(other)?;
    let mut terms = BTreeMap::new();
    for (i, c) in &self.terms {
      for (j, e) in &other.terms {
        let ce = c * e;
        for (k, v) in self.algebra.mul_basis(*i, *j)? {
          accumulate(&mut terms, k, &ce * &v);
        }
      }
    }
    Ok(Self { algebra: Arc::clone(&self.algebra), terms })
  }

  /// `x^k`, with `x^0` the unit.
  pub fn power(&self, k: u32) -> Result<Self, RingError> {
    let mut acc = self.algebra.unit();
    for _ in 0..k {
      acc = acc.multiply(self)?;
      if acc.is_zero() {
        break;
      }
    }
    Ok(acc)
  }
}

/// `x ⊗ y` in `A ⊗ B`.
pub fn pure_tensor(ab: &Arc<GradedAlgebra>, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, RingError> {
  let (a, b) = ab.tensor_factors().ok_or(RingError::NotTensor)?;
  if !Arc::ptr_eq(a, &x.algebra) || !Arc::ptr_eq(b, &y.algebra) {
    return Err(RingError::AlgebraMismatch);
  }
  let mut terms = BTreeMap::new();
  for (i, c) in &x.terms {
    for (j, e) in &y.terms {
      let k = ab.tensor_index(*i, *j).expect("tensor index");
      accumulate(&mut terms, k, c * e);
    }
  }
  Ok(AlgebraElement { algebra: Arc::clone(ab), terms })
}

/// `x ⊗ 1`.
pub fn left_inclusion(ab: &Arc<GradedAlgebra>, x: &AlgebraElement) -> Result<AlgebraElement, RingError> {
  let (_, b) = ab.tensor_factors().ok_or(RingError::NotTensor)?;
  pure_tensor(ab, x, &b.unit())
}

/// `1 ⊗ y`.
pub fn right_inclusion(ab: &Arc<GradedAlgebra>, y: &AlgebraElement) -> Result<AlgebraElement, RingError> {
  let (a, _) = ab.tensor_factors().ok_or(RingError::NotTensor)?;
  pure_tensor(ab, &a.unit(), y)
}

fn self_tensor_factor(aa: &Arc<GradedAlgebra>) -> Result<&Arc<GradedAlgebra>, RingError> {
  match aa.tensor_factors() {
    Some((a, b)) if Arc::ptr_eq(a, b) => Ok(a),
    _ => Err(RingError::NotSelfTensor),
  }
}

/// The multiplication map `A ⊗ A → A`, `a ⊗ b ↦ a·b`.
#[derive(Clone, Debug)]
pub struct DiagonalRestriction {
  square: Arc<GradedAlgebra>,
  base:   Arc<GradedAlgebra>,
}

/// Multiplication map of a tensor square; zero-divisors form its kernel.
pub fn diagonal_restriction(aa: &Arc<GradedAlgebra>) -> Result<DiagonalRestriction, RingError> {
  let base = Arc::clone(self_tensor_factor(aa)?);
  Ok(DiagonalRestriction { square: Arc::clone(aa), base })
}

impl DiagonalRestriction {
  pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement, RingError> {
    if !Arc::ptr_eq(&x.algebra, &self.square) {
      return Err(RingError::AlgebraMismatch);
    }
    let mut terms = BTreeMap::new();
    for (k, c) in &x.terms {
      let (a, b) = self.square.tensor_pair(*k).expect("tensor square");
      for (t, v) in self.base.mul_basis(a, b)? {
        accumulate(&mut terms, t, c * &v);
      }
    }
    Ok(AlgebraElement { algebra: Arc::clone(&self.base), terms })
  }

  /// Matrix with `dim A` rows and `dim A⊗A` columns.
  pub fn matrix(&self) -> Result<Matrix, RingError> {
    let field = self.base.field;
    let mut m = Matrix::zeros(field, self.base.len(), self.square.len());
    for k in 0..self.square.len() {
      let (a, b) = self.square.tensor_pair(k).expect("tensor square");
      for (t, v) in self.base.mul_basis(a, b)? {
        m.set(t, k, v);
      }
    }
    Ok(m)
  }
}

/// `ū = 1⊗u − u⊗1` in `A ⊗ A`.
pub fn zero_divisor(aa: &Arc<GradedAlgebra>, u: &AlgebraElement) -> Result<AlgebraElement, RingError> {
  let a = self_tensor_factor(aa)?;
  if !Arc::ptr_eq(a, &u.algebra) {
    return Err(RingError::AlgebraMismatch);
  }
  if !u.is_homogeneous() {
    return Err(RingError::NonHomogeneous);
  }
  right_inclusion(aa, u)?.sub(&left_inclusion(aa, u)?)
}

/// Coordinates of the `A^p ⊗ B^q` block, ordered by `(a, b)`.
pub fn bidegree_component(x: &AlgebraElement, p: usize, q: usize) -> Result<Vec<Scalar>, RingError> {
  let ab = &x.algebra;
  let (a, b) = ab.tensor_factors().ok_or(RingError::NotTensor)?;
  if p >= a.dims.len() || q >= b.dims.len() {
    return Err(RingError::InvalidBidegree { p, q });
  }
  let mut out = Vec::with_capacity(a.dims[p] * b.dims[q]);
  for i in a.degree_range(p) {
    for j in b.degree_range(q) {
      out.push(x.coefficient(ab.tensor_index(i, j).expect("tensor index")));
    }
  }
  Ok(out)
}

/// Re-expresses `a` in a new homogeneous basis (unit first, listed by
/// degree with `a.dims()` elements per degree).
pub fn change_basis(a: &Arc<GradedAlgebra>, basis: &[AlgebraElement]) -> Result<GradedAlgebra, RingError> {
  let field = a.field();
  if basis.len() != a.len() || basis.iter().any(|b| !Arc::ptr_eq(b.algebra(), a)) {
    return Err(RingError::AlgebraMismatch);
  }
  for (i, b) in basis.iter().enumerate() {
    if b.is_zero() || b.degree() != Some(a.degree_of(i)) {
      return Err(RingError::Invalid(format!("new basis element {i} has the wrong degree")));
    }
  }
  if basis[0] != a.unit() {
    return Err(RingError::Invalid("new basis must start with the unit".into()));
  }
  // change-of-basis matrix per degree: columns are the new vectors
  let blocks: Vec<Matrix> = (0..a.dims().len())
    .map(|d| {
      let r = a.degree_range(d);
      let cols: Vec<Vec<Scalar>> = basis[r.clone()].iter().map(|b| b.component(d)).collect();
      Matrix::from_columns(field, r.len(), &cols)
    })
    .collect();
  for (d, m) in blocks.iter().enumerate() {
    if linalg::rank(m) != a.dims()[d] {
      return Err(RingError::Invalid(format!("new basis is not independent in degree {d}")));
    }
  }
  let mut builder = AlgebraBuilder::new(field, a.dims().to_vec());
  for i in 0..basis.len() {
    for j in 0..basis.len() {
      let d = a.degree_of(i) + a.degree_of(j);
      if d >= a.dims().len() {
        continue;
      }
      match basis[i].multiply(&basis[j]) {
        Ok(p) => {
          let x = linalg::solve(&blocks[d], &p.component(d)).ok_or_else(|| {
            RingError::InvariantViolation("product outside the span of the new basis".into())
          })?;
          let start = a.degree_range(d).start;
          builder.product(i, j, x.into_iter().enumerate().map(|(k, c)| (start + k, c)).collect());
        },
        Err(RingError::UnknownProduct { .. }) => {
          builder.unknown(i, j);
        },
        Err(e) => return Err(e),
      }
    }
  }
  builder.build()
}

/// Deterministic basis: the given basis in degrees 0 and 1; in degree `d ≥ 2`
/// the independent products `x · y` (`x` of degree 1, `y` of degree `d − 1`,
/// both from the new basis, in index order), completed by the old basis.
pub fn product_normal_basis(a: &Arc<GradedAlgebra>) -> Result<Vec<AlgebraElement>, RingError> {
  let field = a.field();
  let mut basis: Vec<AlgebraElement> = Vec::with_capacity(a.len());
  let mut by_degree: Vec<core::ops::Range<usize>> = Vec::new();
  for d in 0..a.dims().len() {
    let start = basis.len();
    let want = a.dims()[d];
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    let mut push = |x: AlgebraElement, basis: &mut Vec<AlgebraElement>| {
      if chosen.len() == want || x.is_zero() {
        return;
      }
      let v = x.component(d);
      let mut cols = chosen.clone();
      cols.push(v.clone());
      if linalg::rank(&Matrix::from_columns(field, want, &cols)) == cols.len() {
        chosen.push(v);
        basis.push(x);
      }
    };
    if d >= 2 {
      for x in by_degree[1].clone() {
        for y in by_degree[d - 1].clone() {
          if let Ok(p) = basis[x].multiply(&basis[y]) {
            push(p, &mut basis);
          }
        }
      }
    }
    for i in a.degree_range(d) {
      push(a.basis_element(i), &mut basis);
    }
    by_degree.push(start..basis.len());
  }
  Ok(basis)
}

/// Exterior algebra on `n` generators of degree 1, basis ordered by subsets.
pub fn exterior_algebra(field: FieldSpec, names: &[&str]) -> Result<GradedAlgebra, RingError> {
  let n = names.len();
  let mut subsets: Vec<u32> = (0..(1u32 << n)).collect();
  subsets.sort_by_key(|s| (s.count_ones(), (0..n).map(|i| (s >> i) & 1 == 0).collect::<Vec<_>>()));
  let mut dims = vec![0; n + 1];
  let mut labels = Vec::new();
  let mut position = BTreeMap::new();
  for (k, &s) in subsets.iter().enumerate() {
    dims[s.count_ones() as usize] += 1;
    position.insert(s, k);
    labels.push(if s == 0 {
      "1".to_string()
    } else {
      (0..n).filter(|i| (s >> i) & 1 == 1).map(|i| names[i]).collect::<Vec<_>>().join("")
    });
  }
  let mut builder = AlgebraBuilder::new(field, dims).labels(labels);
  for &s in &subsets {
    for &t in &subsets {
      if s & t != 0 || s == 0 || t == 0 {
        continue;
      }
      // sign of merging the sorted generator lists of s and t
      let mut inversions = 0;
      for i in 0..n {
        if (s >> i) & 1 == 1 {
          inversions += (t & ((1u32 << i) - 1)).count_ones();
        }
      }
      let v = sign(field, inversions % 2 == 1);
      builder.product(position[&s], position[&t], vec![(position[&(s | t)], v)]);
    }
  }
  builder.build()
}

/// `F[u]/(u^{m+1})` with `|u| = degree`, basis `1, u, …, u^m`.
pub fn truncated_polynomial(field: FieldSpec, degree: usize, max_power: usize) -> Result<GradedAlgebra, RingError> {
  assert!(degree > 0, "generator must have positive degree");
  let mut dims = vec![0; degree * max_power + 1];
  for k in 0..=max_power {
    dims[k * degree] = 1;
  }
  let labels = (0..=max_power)
    .map(|k| match k {
      0 => "1".to_string(),
      1 => "u".to_string(),
      _ => format!("u^{k}"),
    })
    .collect();
  let mut builder = AlgebraBuilder::new(field, dims).labels(labels);
  for i in 1..=max_power {
    for j in 1..=max_power {
      let v = if i + j <= max_power { vec![(i + j, field.one())] } else { Vec::new() };
      builder.product(i, j, v);
    }
  }
  if degree % 2 == 1 && max_power >= 2 && field.characteristic() != 2 {
    return Err(RingError::Invalid("odd-degree polynomial generator must square to zero".into()));
  }
  builder.build()
}
