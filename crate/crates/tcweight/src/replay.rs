//! Independent certificate checker.
//!
//! Re-evaluates every witness product from the structure constants stored in
//! the certificate, with its own arithmetic: products of pure tensors are taken
//! factor by factor with the sign `(−1)^{Σ_{i>j} |x_i||y_j|}`. Nothing here
//! calls into the engine or the ring module.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::certificate::{CertificateDoc, FactorDoc, FactorTable, StepDoc, TermDoc, WitnessDoc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
  #[error("unsupported certificate schema version {0}")]
  Version(u32),
  #[error("bad field header: {0}")]
  Field(String),
  #[error("malformed data at {at}: {reason}")]
  Malformed { at: String, reason: String },
  #[error("step {step} ({rule}): {reason}")]
  Step { step: usize, rule: String, reason: String },
  #[error("bounds: {0}")]
  Bounds(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayReport {
  pub steps:             usize,
  pub products_checked:  usize,
  pub theorems_checked:  usize,
}

type Coef = BigRational;
type Element = BTreeMap<Vec<usize>, Coef>;

enum Entry {
  Known(Vec<(usize, Coef)>),
  Unknown,
}

struct Leaf {
  degrees: Vec<usize>,
  table:   HashMap<(usize, usize), Entry>,
}

struct Arith {
  p: Option<BigInt>,
}

impl Arith {
  fn norm(&self, x: Coef) -> Coef {
    match &self.p {
      None => x,
      Some(p) => {
        let n = x.to_integer();
        Coef::from_integer(((n % p) + p) % p)
      },
    }
  }

  fn parse(&self, s: &str, at: &str) -> Result<Coef, ReplayError> {
    let bad = |reason: String| ReplayError::Malformed { at: at.into(), reason };
    let q = Coef::from_str(s.trim()).map_err(|e| bad(format!("scalar {s:?}: {e}")))?;
    if self.p.is_some() && !q.is_integer() {
      return Err(bad(format!("scalar {s:?} is not a residue")));
    }
    Ok(self.norm(q))
  }

  fn char_is(&self, c: u64) -> bool { self.p.as_ref().is_some_and(|p| *p == BigInt::from(c)) }
}

struct Checker<'a> {
  doc:    &'a CertificateDoc,
  arith:  Arith,
  leaves: Vec<Leaf>,
}

fn is_prime(n: u64) -> bool { n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d)) }

impl<'a> Checker<'a> {
  fn new(doc: &'a CertificateDoc) -> Result<Self, ReplayError> {
    let c = doc.field.characteristic;
    let arith = match c {
      0 => Arith { p: None },
      p if is_prime(p) => Arith { p: Some(BigInt::from(p)) },
      _ => return Err(ReplayError::Field(format!("characteristic {c} is neither 0 nor prime"))),
    };
    let mut leaves = Vec::new();
    for (f, t) in doc.ring.factors.iter().enumerate() {
      leaves.push(Self::leaf(&arith, t, &format!("ring.factors[{f}]"))?);
    }
    if leaves.is_empty() {
      return Err(ReplayError::Malformed { at: "ring.factors".into(), reason: "no factors".into() });
    }
    Ok(Self { doc, arith, leaves })
  }

  fn leaf(arith: &Arith, t: &FactorTable, at: &str) -> Result<Leaf, ReplayError> {
    let bad = |reason: String| ReplayError::Malformed { at: at.into(), reason };
    let degrees: Vec<usize> = t.dims.iter().enumerate().flat_map(|(d, &n)| std::iter::repeat_n(d, n)).collect();
    if t.dims.first() != Some(&1) {
      return Err(bad("degree 0 must be one-dimensional".into()));
    }
    let n = degrees.len();
    let mut table = HashMap::new();
    for e in &t.products {
      if e.left == 0 || e.right == 0 || e.left >= n || e.right >= n {
        return Err(bad(format!("product entry ({}, {}) out of range", e.left, e.right)));
      }
      let mut v = Vec::new();
      for (k, s) in &e.value {
        if *k >= n || degrees[*k] != degrees[e.left] + degrees[e.right] {
          return Err(bad(format!("product ({}, {}) has a term of the wrong degree", e.left, e.right)));
        }
        v.push((*k, arith.parse(s, at)?));
      }
      table.insert((e.left, e.right), Entry::Known(v));
    }
    for &[i, j] in &t.unknown {
      if i == 0 || j == 0 || i >= n || j >= n {
        return Err(bad(format!("unknown entry ({i}, {j}) out of range")));
      }
      table.insert((i, j), Entry::Unknown);
    }
    Ok(Leaf { degrees, table })
  }

  fn leaf_mul(&self, leaf: &Leaf, i: usize, j: usize) -> Result<Vec<(usize, Coef)>, String> {
    if i == 0 {
      return Ok(vec![(j, Coef::one())]);
    }
    if j == 0 {
      return Ok(vec![(i, Coef::one())]);
    }
    match leaf.table.get(&(i, j)) {
      None => Ok(Vec::new()),
      Some(Entry::Known(v)) => Ok(v.clone()),
      Some(Entry::Unknown) => Err(format!("product ({i}, {j}) is unknown")),
    }
  }

  /// Product in `L_1 ⊗ ⋯ ⊗ L_m` where `layout` lists the leaves.
  fn mul(&self, x: &Element, y: &Element, layout: &[&Leaf]) -> Result<Element, String> {
    let mut out = Element::new();
    for (a, ca) in x {
      for (b, cb) in y {
        let mut exponent = 0usize;
        for i in 0..layout.len() {
          for j in 0..i {
            exponent += layout[i].degrees[a[i]] * layout[j].degrees[b[j]];
          }
        }
        let mut coef = ca * cb;
        if exponent % 2 == 1 {
          coef = -coef;
        }
        let mut partial: Vec<(Vec<usize>, Coef)> = vec![(Vec::with_capacity(layout.len()), coef)];
        for (t, leaf) in layout.iter().enumerate() {
          let r = self.leaf_mul(leaf, a[t], b[t])?;
          let mut next = Vec::with_capacity(partial.len() * r.len());
          for (idx, c) in &partial {
            for (k, ck) in &r {
              let mut v = idx.clone();
              v.push(*k);
              next.push((v, c * ck));
            }
          }
          partial = next;
          if partial.is_empty() {
            break;
          }
        }
        for (idx, c) in partial {
          let slot = out.entry(idx).or_insert_with(Coef::zero);
          *slot = self.arith.norm(&*slot + c);
        }
      }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
  }

  fn single_layout(&self) -> Vec<&Leaf> { self.leaves.iter().collect() }

  fn double_layout(&self) -> Vec<&Leaf> { self.leaves.iter().chain(self.leaves.iter()).collect() }

  fn element(&self, terms: &[TermDoc], width: usize, at: &str) -> Result<Element, ReplayError> {
    let layout = if width == self.leaves.len() { self.single_layout() } else { self.double_layout() };
    let mut e = Element::new();
    for t in terms {
      if t.index.len() != width || t.index.iter().zip(&layout).any(|(i, l)| *i >= l.degrees.len()) {
        return Err(ReplayError::Malformed { at: at.into(), reason: format!("bad index {:?}", t.index) });
      }
      let c = self.arith.parse(&t.coefficient, at)?;
      let slot = e.entry(t.index.clone()).or_insert_with(Coef::zero);
      *slot = self.arith.norm(&*slot + c);
    }
    e.retain(|_, c| !c.is_zero());
    Ok(e)
  }

  fn unit(&self, width: usize) -> Element { [(vec![0; width], Coef::one())].into_iter().collect() }

  fn degree(&self, e: &Element) -> Option<usize> {
    let layout = self.single_layout();
    let mut degs = e.keys().map(|k| k.iter().zip(&layout).map(|(i, l)| l.degrees[*i]).sum::<usize>());
    let first = degs.next()?;
    degs.all(|d| d == first).then_some(first)
  }

  /// `1⊗x − x⊗1`.
  fn zero_divisor(&self, x: &Element) -> Element {
    let m = self.leaves.len();
    let mut out = Element::new();
    for (idx, c) in x {
      let left: Vec<usize> = vec![0; m].into_iter().chain(idx.iter().copied()).collect();
      let right: Vec<usize> = idx.iter().copied().chain(vec![0; m]).collect();
      for (k, v) in [(left, c.clone()), (right, -c.clone())] {
        let slot = out.entry(k).or_insert_with(Coef::zero);
        *slot = self.arith.norm(&*slot + v);
      }
    }
    out.retain(|_, c| !c.is_zero());
    out
  }

  fn power(&self, x: &Element, k: u32, layout: &[&Leaf]) -> Result<Element, String> {
    let mut acc = self.unit(layout.len());
    for _ in 0..k {
      acc = self.mul(&acc, x, layout)?;
    }
    Ok(acc)
  }

  fn marked(&self, name: &str) -> Option<&crate::certificate::MarkedDoc> {
    self.doc.ring.marked_classes.iter().find(|m| m.name == name)
  }

  fn class_element(&self, name: &str, at: &str) -> Result<Element, ReplayError> {
    let m = self
      .marked(name)
      .ok_or_else(|| ReplayError::Malformed { at: at.into(), reason: format!("unknown class {name}") })?;
    let e = self.element(&m.coordinates, self.leaves.len(), at)?;
    if e.is_empty() || self.degree(&e) != Some(m.degree) {
      return Err(ReplayError::Malformed { at: at.into(), reason: format!("class {name} is zero or not of degree {}", m.degree) });
    }
    Ok(e)
  }

  fn has_atoroidal_provenance(&self, name: &str, before: usize) -> bool {
    self.doc.steps[..before].iter().any(|s| {
      (s.rule == "USER_ASSERTION" || s.rule == "ATOROIDAL_PROMOTION")
        && s.subject == name
        && s.outputs.iter().any(|o| o.contains("atoroidal"))
    })
  }

  fn check_product(&self, k: usize, step: &StepDoc, report: &mut ReplayReport) -> Result<usize, ReplayError> {
    let fail = |reason: String| ReplayError::Step { step: k, rule: step.rule.clone(), reason };
    let Some(WitnessDoc::Product { factors, value, weight }) = &step.witness else {
      return Err(fail("missing product witness".into()));
    };
    let weighted = step.rule == "WEIGHTED_LOWER";
    let layout = self.double_layout();
    let width = layout.len();
    let at = format!("steps[{k}].witness");
    let mut acc = self.unit(width);
    let mut total = 0usize;
    for f in factors {
      let (zd, exponent, w) = match f {
        FactorDoc::Class { class, exponent } => {
          if !weighted {
            return Err(fail(format!("class factor {class} in a plain zero-divisor product")));
          }
          let m = self.marked(class).ok_or_else(|| fail(format!("unknown class {class}")))?;
          if !m.atoroidal || m.degree != 2 {
            return Err(fail(format!("{class} is not an atoroidal degree-2 class")));
          }
          if !self.has_atoroidal_provenance(class, k) {
            return Err(fail(format!("no earlier step establishes that {class} is atoroidal")));
          }
          (self.zero_divisor(&self.class_element(class, &at)?), *exponent, 2 * *exponent as usize)
        },
        FactorDoc::Basis { index } => {
          let x = self.element(&[TermDoc { index: index.clone(), coefficient: "1".into() }], self.leaves.len(), &at)?;
          if self.degree(&x) == Some(0) {
            return Err(fail("zero-divisor of a degree-0 element".into()));
          }
          (self.zero_divisor(&x), 1, 1)
        },
      };
      acc = self.mul(&acc, &self.power(&zd, exponent, &layout).map_err(&fail)?, &layout).map_err(&fail)?;
      total += w;
    }
    report.products_checked += 1;
    if acc.is_empty() {
      return Err(fail("witness product is zero".into()));
    }
    if acc != self.element(value, width, &at)? {
      return Err(fail("recomputed product differs from the stored value".into()));
    }
    if *weight != total || step.bound != Some(total) {
      return Err(fail(format!("claimed weight {weight} / bound {:?}, recomputed {total}", step.bound)));
    }
    Ok(total)
  }

  fn check_theorem(&self, k: usize, step: &StepDoc, report: &mut ReplayReport) -> Result<(), ReplayError> {
    let fail = |reason: String| ReplayError::Step { step: k, rule: step.rule.clone(), reason };
    let Some(WitnessDoc::Theorem { n, classes, class_product, .. }) = &step.witness else {
      return Err(fail("missing theorem witness".into()));
    };
    let n = *n;
    let c = self.doc.field.characteristic;
    if 2 * n != self.doc.dimension || n == 0 {
      return Err(fail(format!("dimension {} is not 2n with n = {n}", self.doc.dimension)));
    }
    let single = self.single_layout();
    let at = format!("steps[{k}].witness");
    let us = classes.iter().map(|name| self.class_element(name, &at)).collect::<Result<Vec<_>, _>>()?;
    for name in classes {
      let m = self.marked(name).ok_or_else(|| fail(format!("unknown class {name}")))?;
      if !m.atoroidal || m.degree != 2 || !self.has_atoroidal_provenance(name, k) {
        return Err(fail(format!("{name} is not an established atoroidal degree-2 class")));
      }
    }
    let product = match step.rule.as_str() {
      "THM_SPECIAL" => {
        if self.arith.char_is(2) {
          return Err(fail("characteristic 2".into()));
        }
        if us.len() != n {
          return Err(fail(format!("{} classes for n = {n}", us.len())));
        }
        for (u, name) in us.iter().zip(classes) {
          if !self.mul(u, u, &single).map_err(&fail)?.is_empty() {
            return Err(fail(format!("{name} squared is nonzero")));
          }
        }
        let mut acc = self.unit(single.len());
        for u in &us {
          acc = self.mul(&acc, u, &single).map_err(&fail)?;
        }
        acc
      },
      _ => {
        if c != 0 && c <= 2 * n as u64 {
          return Err(fail(format!("characteristic {c} is at most 2n = {}", 2 * n)));
        }
        if us.len() != 1 {
          return Err(fail("expects exactly one class".into()));
        }
        self.power(&us[0], n as u32, &single).map_err(&fail)?
      },
    };
    if product.is_empty() || product != self.element(class_product, single.len(), &at)? {
      return Err(fail("class product is zero or differs from the stored value".into()));
    }
    let backed = self.doc.steps[..k].iter().any(|s| s.rule == "WEIGHTED_LOWER" && s.bound == Some(4 * n));
    if !backed {
      return Err(fail(format!("no weighted product of weight {} precedes it", 4 * n)));
    }
    report.theorems_checked += 1;
    Ok(())
  }
}

const RULES: [&str; 8] = [
  "DIM_UPPER",
  "ZD_PRODUCT_LOWER",
  "WEIGHTED_LOWER",
  "ATOROIDAL_PROMOTION",
  "ASPHERICAL_FROM_2ASPHERICAL",
  "USER_ASSERTION",
  "THM_MAIN",
  "THM_SPECIAL",
];

pub fn replay(doc: &CertificateDoc) -> Result<ReplayReport, ReplayError> {
  if doc.schema_version != crate::certificate::CERTIFICATE_SCHEMA_VERSION {
    return Err(ReplayError::Version(doc.schema_version));
  }
  let checker = Checker::new(doc)?;
  for (i, m) in doc.ring.marked_classes.iter().enumerate() {
    checker.class_element(&m.name, &format!("ring.marked_classes[{i}]"))?;
  }
  let dim_from_ring = checker.leaves.iter().map(|l| l.degrees.last().copied().unwrap_or(0)).sum::<usize>();
  if dim_from_ring > doc.dimension {
    return Err(ReplayError::Bounds(format!("ring has classes above dimension {}", doc.dimension)));
  }
  let mut report = ReplayReport { steps: doc.steps.len(), ..ReplayReport::default() };
  let mut lower = 0usize;
  let mut upper = None;
  for (k, step) in doc.steps.iter().enumerate() {
    if !RULES.contains(&step.rule.as_str()) {
      return Err(ReplayError::Step { step: k, rule: step.rule.clone(), reason: "unknown rule".into() });
    }
    match step.rule.as_str() {
      "DIM_UPPER" => {
        if step.bound != Some(2 * doc.dimension) {
          return Err(ReplayError::Step { step: k, rule: step.rule.clone(), reason: "bound is not 2·dim".into() });
        }
        upper = step.bound;
      },
      "WEIGHTED_LOWER" | "ZD_PRODUCT_LOWER" => lower = lower.max(checker.check_product(k, step, &mut report)?),
      "THM_MAIN" | "THM_SPECIAL" => checker.check_theorem(k, step, &mut report)?,
      _ => {},
    }
  }
  let upper = upper.ok_or_else(|| ReplayError::Bounds("no DIM_UPPER step".into()))?;
  if doc.upper != upper || doc.lower != lower {
    return Err(ReplayError::Bounds(format!(
      "header claims [{}, {}], steps prove [{lower}, {upper}]",
      doc.lower, doc.upper
    )));
  }
  if lower > upper || doc.exact != (lower == upper) {
    return Err(ReplayError::Bounds(format!("inconsistent interval [{lower}, {upper}] with exact = {}", doc.exact)));
  }
  if doc.route.starts_with("THM_") && !doc.steps.iter().any(|s| s.rule == doc.route) {
    return Err(ReplayError::Bounds(format!("route {} has no matching step", doc.route)));
  }
  Ok(report)
}
