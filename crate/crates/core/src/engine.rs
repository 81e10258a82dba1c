//! Topological complexity certificates.
//!
//! A certificate is an ordered list of inference steps ending in an interval
//! `lo ≤ TC(X) ≤ hi` (reduced convention, `TC(point) = 0`):
//!
//! * `DIM_UPPER`: `TC(X) ≤ 2·dim X`.
//! * `ZD_PRODUCT_LOWER`: a nonzero product of `k` zero-divisors in
//!   `H*(X) ⊗ H*(X)` gives `TC(X) ≥ k`.
//! * `WEIGHTED_LOWER`: zero-divisors `ū = 1⊗u − u⊗1` of atoroidal degree-2
//!   classes have weight 2, ordinary zero-divisors weight 1, weights add under
//!   products, and a nonzero product bounds `TC` by its weight.
//! * `ATOROIDAL_PROMOTION`, `ASPHERICAL_FROM_2ASPHERICAL`, `USER_ASSERTION`:
//!   bookkeeping for where an atoroidal tag came from.
//! * `THM_MAIN`, `THM_SPECIAL`: the weighted product has the shape of one of
//!   the closed-form results (`ū^{2n}` with `u^n ≠ 0`, or `∏ ū_j²` with
//!   `u_j² = 0`) and the side conditions on the characteristic hold, so
//!   `TC(X) = 2·dim X`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::builders::{pullback_ring, Space};
use crate::error::{BuildError, FieldError, RingError};
use crate::field::{binomial_in_field, FieldSpec, Scalar};
use crate::ring::{self, AlgebraElement, ClassTag, GradedAlgebra, MarkedClass, Sparse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
  #[error(transparent)]
  Build(#[from] BuildError),
  #[error(transparent)]
  Ring(#[from] RingError),
  #[error(transparent)]
  Field(#[from] FieldError),
  #[error("internal inconsistency: {0}")]
  Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
  DimUpper,
  ZdProductLower,
  WeightedLower,
  AtoroidalPromotion,
  AsphericalFrom2Aspherical,
  UserAssertion,
  ThmMain,
  ThmSpecial,
}

impl Rule {
  pub const ALL: [Rule; 8] = [
    Rule::DimUpper,
    Rule::ZdProductLower,
    Rule::WeightedLower,
    Rule::AtoroidalPromotion,
    Rule::AsphericalFrom2Aspherical,
    Rule::UserAssertion,
    Rule::ThmMain,
    Rule::ThmSpecial,
  ];

  pub fn as_str(self) -> &'static str {
    match self {
      Rule::DimUpper => "DIM_UPPER",
      Rule::ZdProductLower => "ZD_PRODUCT_LOWER",
      Rule::WeightedLower => "WEIGHTED_LOWER",
      Rule::AtoroidalPromotion => "ATOROIDAL_PROMOTION",
      Rule::AsphericalFrom2Aspherical => "ASPHERICAL_FROM_2ASPHERICAL",
      Rule::UserAssertion => "USER_ASSERTION",
      Rule::ThmMain => "THM_MAIN",
      Rule::ThmSpecial => "THM_SPECIAL",
    }
  }

  pub fn parse(s: &str) -> Option<Rule> { Rule::ALL.into_iter().find(|r| r.as_str() == s) }
}

/// One factor of a witness product in `A ⊗ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessFactor {
  /// `ū^exponent` for a marked atoroidal class; weight 2 per power.
  Atoroidal { class: String, exponent: u32 },
  /// `1⊗x − x⊗1` for basis element `x` of `A`; weight 1.
  ZeroDivisor { basis: usize },
}

/// A nonzero product in `A ⊗ A` and the bound it proves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWitness {
  pub factors: Vec<WitnessFactor>,
  pub value:   Sparse,
  pub weight:  usize,
}

/// Hypothesis data of a closed-form result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremWitness {
  pub n:               usize,
  pub classes:         Vec<String>,
  /// `u_1 ⋯ u_n` (special form) or `u^n` (main form), in `A`.
  pub class_product:   Sparse,
  /// Main form only: the `(2n, 2n)` block of `ū^{2n}` and the coefficient
  /// `(-1)^n C(2n, n)` it is expected to carry on `u^n ⊗ u^n`.
  pub component_check: Option<ComponentCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCheck {
  pub coefficient: Scalar,
  pub matches:     bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
  Product(ProductWitness),
  Theorem(TheoremWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
  pub rule:    Rule,
  pub subject: String,
  pub inputs:  Vec<String>,
  pub outputs: Vec<String>,
  pub bound:   Option<usize>,
  pub witness: Option<Witness>,
}

impl Step {
  fn new(rule: Rule, subject: impl Into<String>) -> Self {
    Self { rule, subject: subject.into(), inputs: Vec::new(), outputs: Vec::new(), bound: None, witness: None }
  }

  fn inputs<I: IntoIterator<Item = S>, S: Into<String>>(mut self, v: I) -> Self {
    self.inputs = v.into_iter().map(Into::into).collect();
    self
  }

  fn outputs<I: IntoIterator<Item = S>, S: Into<String>>(mut self, v: I) -> Self {
    self.outputs = v.into_iter().map(Into::into).collect();
    self
  }
}

/// A rule that could not be applied, and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refusal {
  pub rule:    Rule,
  pub subject: String,
  pub reason:  String,
}

/// Which argument closed (or failed to close) the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
  Theorem(Rule),
  Weighted,
  ZeroDivisor,
  Trivial,
}

impl Route {
  pub fn as_str(self) -> &'static str {
    match self {
      Route::Theorem(r) => r.as_str(),
      Route::Weighted => "generic weighted rule",
      Route::ZeroDivisor => "zero-divisor cup-length",
      Route::Trivial => "none",
    }
  }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
  /// Maximum number of zero-divisor factors; `None` means `2·dim`.
  pub depth:            Option<usize>,
  /// Budget in basis-pair multiplications for each search.
  pub work_budget:      u64,
  /// Maximum number of exponent vectors tried by the weighted search.
  pub exponent_vectors: usize,
}

impl Default for SearchLimits {
  fn default() -> Self { Self { depth: None, work_budget: 500_000, exponent_vectors: 20_000 } }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
  pub work:          u64,
  pub capped:        bool,
  pub unknown_skips: u64,
  pub explored:      u64,
  /// The search was not run because the interval was already closed.
  pub skipped:       bool,
}

/// Outcome of one lower-bound search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
  pub bound:   usize,
  pub witness: Option<ProductWitness>,
  pub report:  SearchReport,
}

#[derive(Clone, Debug)]
pub struct Certificate {
  pub space:     String,
  pub field:     FieldSpec,
  pub dimension: usize,
  /// `H*(X; F)` with resolved class tags.
  pub ring:      Arc<GradedAlgebra>,
  /// `H*(X; F) ⊗ H*(X; F)`, the algebra the witnesses live in.
  pub square:    Arc<GradedAlgebra>,
  pub steps:     Vec<Step>,
  pub refusals:  Vec<Refusal>,
  pub lower:     usize,
  pub upper:     usize,
  pub exact:     bool,
  pub route:     Route,
  pub depth:     usize,
  pub weighted:  SearchReport,
  pub zero_div:  SearchReport,
}

/// `TC(X) ≤ 2·dim X`.
pub fn upper_bound_dimension(space: &Space) -> Step {
  let bound = 2 * space.dimension();
  let mut step = Step::new(Rule::DimUpper, space.name())
    .inputs([format!("dim = {}", space.dimension())])
    .outputs([format!("TC <= {bound}")]);
  step.bound = Some(bound);
  step
}

/// Tries to show that the degree-2 marked class `class` of `space` is atoroidal.
pub fn promote_atoroidal(space: &Space, class: &str, degree: usize, field: FieldSpec) -> Result<Vec<Step>, Refusal> {
  let a = space.assertions();
  let refuse = |reason: String| Refusal { rule: Rule::AtoroidalPromotion, subject: class.to_string(), reason };
  if degree != 2 {
    return Err(refuse(format!("class has degree {degree}; only degree-2 classes are handled")));
  }
  let mut steps = Vec::new();
  let aspherical_via = if a.aspherical_classes.iter().any(|c| c == class) {
    format!("{class} aspherical (asserted)")
  } else if a.two_aspherical {
    steps.push(
      Step::new(Rule::AsphericalFrom2Aspherical, class)
        .inputs([format!("two_aspherical: {}", a.note("two_aspherical"))])
        .outputs([format!("{class} aspherical")]),
    );
    format!("{class} aspherical")
  } else {
    return Err(refuse("class is not known to be aspherical (space not asserted 2-aspherical)".into()));
  };
  if !a.pi1_no_z2 {
    return Err(refuse("pi1 may contain Z^2 (pi1_no_z2 not asserted)".into()));
  }
  let mut inputs = vec![aspherical_via, format!("pi1_no_z2: {}", a.note("pi1_no_z2"))];
  if !field.is_rational() {
    if !a.pi1_torsion_free {
      return Err(refuse(format!(
        "characteristic {} needs pi1 torsion-free (pi1_torsion_free not asserted)",
        field.characteristic()
      )));
    }
    inputs.push(format!("pi1_torsion_free: {}", a.note("pi1_torsion_free")));
  }
  steps.push(Step::new(Rule::AtoroidalPromotion, class).inputs(inputs).outputs([format!("{class} atoroidal over {field}")]));
  Ok(steps)
}

struct Ctx {
  steps:    Vec<Step>,
  refusals: Vec<Refusal>,
}

fn qualified(path: &str, name: &str) -> String {
  if path.is_empty() { name.to_string() } else { format!("{path}/{name}") }
}

fn assertion_steps(space: &Space, path: &str, ctx: &mut Ctx) {
  let a = space.assertions();
  let subject = qualified(path, space.name());
  for (flag, on) in [
    ("aspherical_space", a.aspherical_space),
    ("two_aspherical", a.two_aspherical),
    ("pi1_no_z2", a.pi1_no_z2),
    ("pi1_torsion_free", a.pi1_torsion_free),
  ] {
    if on {
      ctx.steps.push(Step::new(Rule::UserAssertion, subject.clone()).outputs([format!("{flag}: {}", a.note(flag))]));
    }
  }
  for c in &a.aspherical_classes {
    ctx.steps.push(Step::new(Rule::UserAssertion, qualified(path, c)).outputs([format!("{c} aspherical")]));
  }
  for c in &a.atoroidal_classes {
    ctx.steps.push(Step::new(Rule::UserAssertion, qualified(path, c)).outputs([format!("{c} atoroidal")]));
  }
}

/// Ring of `space` with atoroidal tags resolved: user assertions, promotion
/// on each leaf space, pullback along product projections.
fn resolve_ring(space: &Space, field: FieldSpec, path: &str, ctx: &mut Ctx) -> Result<Arc<GradedAlgebra>, EngineError> {
  assertion_steps(space, path, ctx);
  if let Some(factors) = space.factors() {
    let mut rings = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
      let sub = qualified(path, &format!("factor{}", i + 1));
      rings.push(resolve_ring(f, field, &sub, ctx)?);
    }
    let ring = pullback_ring(&rings)?;
    for (i, r) in rings.iter().enumerate() {
      for m in r.marked().iter().filter(|m| m.tag.is_atoroidal()) {
        let sub = qualified(path, &format!("factor{}", i + 1));
        let name = format!("{}_{}", m.name, i + 1);
        ctx.steps.push(
          Step::new(Rule::AtoroidalPromotion, qualified(path, &name))
            .inputs([format!("{} atoroidal", qualified(&sub, &m.name)), "pullback along projection".into()])
            .outputs([format!("{name} atoroidal (pullback)")]),
        );
      }
    }
    return Ok(ring);
  }

  let ring = space.cohomology_ring(field)?;
  let mut marked: Vec<MarkedClass> = ring.marked().to_vec();
  for m in &mut marked {
    if m.tag != ClassTag::Plain {
      continue;
    }
    match promote_atoroidal(space, &m.name, m.degree, field) {
      Ok(steps) => {
        for mut s in steps {
          s.subject = qualified(path, &s.subject);
          ctx.steps.push(s);
        }
        m.tag = ClassTag::PromotedAtoroidal;
      },
      Err(mut r) => {
        r.subject = qualified(path, &r.subject);
        ctx.refusals.push(r);
      },
    }
  }
  Ok(Arc::new(GradedAlgebra::clone(&ring).with_marked(marked)?))
}

/// Multiplication that charges `|x|·|y|` against a budget.
struct Meter {
  report: SearchReport,
  budget: u64,
}

impl Meter {
  fn new(budget: u64) -> Self { Self { report: SearchReport::default(), budget } }

  fn exhausted(&self) -> bool { self.report.work >= self.budget }

  /// `Ok(None)` when the product reads an unknown structure constant.
  fn mul(&mut self, x: &AlgebraElement, y: &AlgebraElement) -> Result<Option<AlgebraElement>, EngineError> {
    let cost = (x.terms().count() * y.terms().count()) as u64;
    self.report.work += cost.max(1);
    match x.multiply(y) {
      Ok(v) => Ok(Some(v)),
      Err(RingError::UnknownProduct { .. }) => {
        self.report.unknown_skips += 1;
        Ok(None)
      },
      Err(e) => Err(e.into()),
    }
  }
}

fn element_degree(x: &AlgebraElement) -> usize { x.degree().unwrap_or(0) }

/// Zero-divisors `x̄` for the positive-degree basis of `A`.
fn basis_zero_divisors(ring: &Arc<GradedAlgebra>, square: &Arc<GradedAlgebra>) -> Result<Vec<(usize, AlgebraElement)>, EngineError> {
  (ring.dims()[0]..ring.len()).map(|i| Ok((i, ring::zero_divisor(square, &ring.basis_element(i))?))).collect()
}

/// The atoroidal degree-2 marked classes the weighted rule may use.
pub fn weighted_classes(ring: &GradedAlgebra) -> Vec<&MarkedClass> {
  ring.marked().iter().filter(|m| m.tag.is_atoroidal() && m.degree == 2).collect()
}

/// Longest nonzero product of basis zero-divisors, exhaustive up to `depth`
/// and the work budget. Products that read unknown constants are skipped.
pub fn zero_divisor_search(
  ring: &Arc<GradedAlgebra>,
  square: &Arc<GradedAlgebra>,
  depth: usize,
  budget: u64,
) -> Result<SearchOutcome, EngineError> {
  let gens = basis_zero_divisors(ring, square)?;
  let top = square.top_degree();
  let mut meter = Meter::new(budget);
  let mut best = (0usize, Vec::new(), square.unit());
  let mut path = Vec::new();

  #[allow(clippy::too_many_arguments)]
  fn dfs(
    start: usize,
    current: &AlgebraElement,
    gens: &[(usize, AlgebraElement)],
    top: usize,
    depth: usize,
    path: &mut Vec<usize>,
    best: &mut (usize, Vec<usize>, AlgebraElement),
    meter: &mut Meter,
  ) -> Result<(), EngineError> {
    let len = path.len();
    if len > best.0 {
      *best = (len, path.clone(), current.clone());
    }
    let room = (top - element_degree(current)).min(depth - len);
    if len == depth || len + room <= best.0 || best.0 == depth {
      return Ok(());
    }
    for (k, (x, xbar)) in gens.iter().enumerate().skip(start) {
      if meter.exhausted() {
        meter.report.capped = true;
        return Ok(());
      }
      if element_degree(current) + element_degree(xbar) > top {
        continue;
      }
      meter.report.explored += 1;
      let Some(next) = meter.mul(current, xbar)? else { continue };
      if next.is_zero() {
        continue;
      }
      path.push(*x);
      dfs(k, &next, gens, top, depth, path, best, meter)?;
      path.pop();
      if best.0 == depth {
        return Ok(());
      }
    }
    Ok(())
  }

  let unit = square.unit();
  dfs(0, &unit, &gens, top, depth, &mut path, &mut best, &mut meter)?;
  let (bound, basis, value) = best;
  let witness = (bound > 0).then(|| ProductWitness {
    factors: basis.into_iter().map(|b| WitnessFactor::ZeroDivisor { basis: b }).collect(),
    value:   value.sparse(),
    weight:  bound,
  });
  Ok(SearchOutcome { bound, witness, report: meter.report })
}

/// Best `2·Σ a_i + |Z|` over nonzero products `∏ ū_i^{a_i} · ∏_{z∈Z} z̄`,
/// exhaustive over exponent vectors, greedy over basis zero-divisors.
pub fn weighted_search(
  ring: &Arc<GradedAlgebra>,
  square: &Arc<GradedAlgebra>,
  limits: &SearchLimits,
) -> Result<SearchOutcome, EngineError> {
  let classes = weighted_classes(ring);
  let mut meter = Meter::new(limits.work_budget);
  if classes.is_empty() {
    return Ok(SearchOutcome { bound: 0, witness: None, report: meter.report });
  }
  let top = square.top_degree();
  // powers ū^a until zero (or unknown)
  let mut powers: Vec<Vec<AlgebraElement>> = Vec::new();
  for c in &classes {
    let ubar = ring::zero_divisor(square, &ring.element(&c.coords))?;
    let mut list = vec![square.unit()];
    loop {
      let last = list.last().expect("nonempty");
      if element_degree(last) + 2 > top {
        break;
      }
      match meter.mul(last, &ubar)? {
        Some(p) if !p.is_zero() => list.push(p),
        _ => break,
      }
    }
    powers.push(list);
  }
  let gens = basis_zero_divisors(ring, square)?;

  struct Best {
    score:    usize,
    atoroid:  usize,
    exponents: Vec<u32>,
    extension: Vec<usize>,
    value:    Option<AlgebraElement>,
  }
  let mut best = Best { score: 0, atoroid: 0, exponents: Vec::new(), extension: Vec::new(), value: None };
  let mut vectors = 0usize;
  let mut exponents = vec![0u32; classes.len()];

  #[allow(clippy::too_many_arguments)]
  fn dfs(
    i: usize,
    current: &AlgebraElement,
    weight2: usize,
    exponents: &mut Vec<u32>,
    powers: &[Vec<AlgebraElement>],
    gens: &[(usize, AlgebraElement)],
    top: usize,
    limits: &SearchLimits,
    vectors: &mut usize,
    best: &mut Best,
    meter: &mut Meter,
  ) -> Result<(), EngineError> {
    if i == powers.len() {
      if weight2 == 0 {
        return Ok(());
      }
      *vectors += 1;
      let sum_a = weight2 / 2;
      let base = weight2;
      let room = top - element_degree(current);
      if base + room < best.score || (base + room == best.score && sum_a <= best.atoroid) {
        return Ok(());
      }
      let mut value = current.clone();
      let mut extension = Vec::new();
      'grow: loop {
        for (x, xbar) in gens {
          if meter.exhausted() {
            meter.report.capped = true;
            break 'grow;
          }
          if element_degree(&value) + element_degree(xbar) > top {
            continue;
          }
          meter.report.explored += 1;
          if let Some(next) = meter.mul(&value, xbar)? {
            if !next.is_zero() {
              value = next;
              extension.push(*x);
              continue 'grow;
            }
          }
        }
        break;
      }
      let score = base + extension.len();
      if score > best.score || (score == best.score && sum_a > best.atoroid) {
        *best = Best { score, atoroid: sum_a, exponents: exponents.clone(), extension, value: Some(value) };
      }
      return Ok(());
    }
    for (a, power) in powers[i].iter().enumerate() {
      if *vectors >= limits.exponent_vectors {
        meter.report.capped = true;
        return Ok(());
      }
      let next = if a == 0 {
        current.clone()
      } else {
        match meter.mul(current, power)? {
          Some(p) if !p.is_zero() => p,
          _ => break,
        }
      };
      exponents[i] = a as u32;
      dfs(i + 1, &next, weight2 + 2 * a, exponents, powers, gens, top, limits, vectors, best, meter)?;
      exponents[i] = 0;
    }
    Ok(())
  }

  let unit = square.unit();
  dfs(0, &unit, 0, &mut exponents, &powers, &gens, top, limits, &mut vectors, &mut best, &mut meter)?;
  let witness = best.value.map(|value| {
    let mut factors: Vec<WitnessFactor> = classes
      .iter()
      .zip(&best.exponents)
      .filter(|(_, &a)| a > 0)
      .map(|(c, &a)| WitnessFactor::Atoroidal { class: c.name.clone(), exponent: a })
      .collect();
    factors.extend(best.extension.iter().map(|&b| WitnessFactor::ZeroDivisor { basis: b }));
    ProductWitness { factors, value: value.sparse(), weight: best.score }
  });
  Ok(SearchOutcome { bound: best.score, witness, report: meter.report })
}

fn product_of(ring: &Arc<GradedAlgebra>, classes: &[&MarkedClass]) -> Result<Option<AlgebraElement>, EngineError> {
  let mut acc = ring.unit();
  for c in classes {
    match acc.multiply(&ring.element(&c.coords)) {
      Ok(v) => acc = v,
      Err(RingError::UnknownProduct { .. }) => return Ok(None),
      Err(e) => return Err(e.into()),
    }
  }
  Ok(Some(acc))
}

struct TheoremHit {
  rule:    Rule,
  witness: TheoremWitness,
  product: ProductWitness,
}

/// `n` atoroidal classes with `u_j² = 0`, `∏ u_j ≠ 0`, characteristic ≠ 2.
fn special_form(
  ring: &Arc<GradedAlgebra>,
  square: &Arc<GradedAlgebra>,
  n: usize,
  field: FieldSpec,
  refusals: &mut Vec<Refusal>,
  subject: &str,
) -> Result<Option<TheoremHit>, EngineError> {
  let refuse = |reason: String| Refusal { rule: Rule::ThmSpecial, subject: subject.to_string(), reason };
  if field.characteristic() == 2 {
    refusals.push(refuse("characteristic(F) = 2".into()));
    return Ok(None);
  }
  let classes = weighted_classes(ring);
  let squares_vanish: Vec<&MarkedClass> = classes
    .iter()
    .copied()
    .filter(|c| matches!(product_of(ring, &[*c, *c]), Ok(Some(v)) if v.is_zero()))
    .collect();
  if squares_vanish.len() < n {
    refusals.push(refuse(format!("needs {n} atoroidal degree-2 classes with u^2 = 0, found {}", squares_vanish.len())));
    return Ok(None);
  }
  for combo in combinations(squares_vanish.len(), n) {
    let chosen: Vec<&MarkedClass> = combo.iter().map(|&i| squares_vanish[i]).collect();
    let Some(prod) = product_of(ring, &chosen)? else { continue };
    if prod.is_zero() {
      continue;
    }
    let mut value = square.unit();
    for c in &chosen {
      let ubar = ring::zero_divisor(square, &ring.element(&c.coords))?;
      value = value.multiply(&ubar.power(2)?)?;
    }
    if value.is_zero() {
      return Err(EngineError::Inconsistent("product of squared zero-divisors vanished".into()));
    }
    let names: Vec<String> = chosen.iter().map(|c| c.name.clone()).collect();
    return Ok(Some(TheoremHit {
      rule:    Rule::ThmSpecial,
      witness: TheoremWitness { n, classes: names.clone(), class_product: prod.sparse(), component_check: None },
      product: ProductWitness {
        factors: names.into_iter().map(|class| WitnessFactor::Atoroidal { class, exponent: 2 }).collect(),
        value:   value.sparse(),
        weight:  4 * n,
      },
    }));
  }
  refusals.push(refuse(format!("no {n} atoroidal classes with vanishing squares have a nonzero product")));
  Ok(None)
}

/// One atoroidal class with `u^n ≠ 0`, characteristic 0 or > 2n.
fn main_form(
  ring: &Arc<GradedAlgebra>,
  square: &Arc<GradedAlgebra>,
  n: usize,
  field: FieldSpec,
  refusals: &mut Vec<Refusal>,
  subject: &str,
) -> Result<Option<TheoremHit>, EngineError> {
  let refuse = |reason: String| Refusal { rule: Rule::ThmMain, subject: subject.to_string(), reason };
  let p = field.characteristic();
  if p != 0 && p <= 2 * n as u64 {
    refusals.push(refuse(format!("characteristic {p} is neither 0 nor > 2n = {}", 2 * n)));
    return Ok(None);
  }
  for c in weighted_classes(ring) {
    let u = ring.element(&c.coords);
    let un = match u.power(n as u32) {
      Ok(v) => v,
      Err(RingError::UnknownProduct { .. }) => continue,
      Err(e) => return Err(e.into()),
    };
    if un.is_zero() {
      continue;
    }
    let ubar = ring::zero_divisor(square, &u)?;
    let full = ubar.power(2 * n as u32)?;
    let coefficient = binomial_in_field(2 * n as u64, n as u64, field)?.times(if n.is_multiple_of(2) { 1 } else { -1 });
    let expected = ring::pure_tensor(square, &un, &un)?.scale(&coefficient);
    let block = ring::bidegree_component(&full, 2 * n, 2 * n)?;
    let matches = block == ring::bidegree_component(&expected, 2 * n, 2 * n)?;
    if full.is_zero() {
      return Err(EngineError::Inconsistent("u-bar^(2n) vanished although u^n != 0".into()));
    }
    return Ok(Some(TheoremHit {
      rule:    Rule::ThmMain,
      witness: TheoremWitness {
        n,
        classes: vec![c.name.clone()],
        class_product: un.sparse(),
        component_check: Some(ComponentCheck { coefficient, matches }),
      },
      product: ProductWitness {
        factors: vec![WitnessFactor::Atoroidal { class: c.name.clone(), exponent: 2 * n as u32 }],
        value:   full.sparse(),
        weight:  4 * n,
      },
    }));
  }
  refusals.push(refuse(format!("no atoroidal degree-2 class u with u^{n} != 0")));
  Ok(None)
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
  let mut out = Vec::new();
  let mut cur = Vec::with_capacity(k);
  fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
      out.push(cur.clone());
      return;
    }
    for i in start..n {
      cur.push(i);
      go(i + 1, n, k, cur, out);
      cur.pop();
    }
  }
  go(0, n, k, &mut cur, &mut out);
  out
}

/// Weighted lower bound for `space` over `field` (promotions included).
pub fn weighted_lower_bound(space: &Space, field: FieldSpec, limits: &SearchLimits) -> Result<SearchOutcome, EngineError> {
  let mut ctx = Ctx { steps: Vec::new(), refusals: Vec::new() };
  let ring = resolve_ring(space, field, "", &mut ctx)?;
  let square = ring::tensor(&ring, &ring)?;
  weighted_search(&ring, &square, limits)
}

/// Zero-divisor cup-length bound for `space` over `field`.
pub fn zd_product_lower_bound(space: &Space, field: FieldSpec, limits: &SearchLimits) -> Result<SearchOutcome, EngineError> {
  let ring = space.cohomology_ring(field)?;
  let square = ring::tensor(&ring, &ring)?;
  let depth = limits.depth.unwrap_or(2 * space.dimension());
  zero_divisor_search(&ring, &square, depth, limits.work_budget)
}

pub fn certify(space: &Space, field: FieldSpec) -> Result<Certificate, EngineError> {
  certify_with(space, field, &SearchLimits::default())
}

pub fn certify_with(space: &Space, field: FieldSpec, limits: &SearchLimits) -> Result<Certificate, EngineError> {
  let mut ctx = Ctx { steps: Vec::new(), refusals: Vec::new() };
  let ring = resolve_ring(space, field, "", &mut ctx)?;
  let square = ring::tensor(&ring, &ring)?;
  let dim = space.dimension();
  let upper = 2 * dim;
  ctx.steps.push(upper_bound_dimension(space));
  let name = space.name().to_string();

  // refusals for user-asserted atoroidal classes the weighted rule cannot use
  for m in ring.marked() {
    if m.tag.is_atoroidal() && m.degree != 2 {
      ctx.refusals.push(Refusal {
        rule:    Rule::WeightedLower,
        subject: m.name.clone(),
        reason:  format!("weight 2 is only established for degree-2 classes, {} has degree {}", m.name, m.degree),
      });
    }
  }

  let mut weighted_bound = 0;
  let mut route = Route::Trivial;
  let mut weighted_report = SearchReport::default();
  let classes = weighted_classes(&ring);
  if classes.is_empty() {
    ctx.refusals.push(Refusal {
      rule:    Rule::WeightedLower,
      subject: name.clone(),
      reason:  "no atoroidal degree-2 classes".into(),
    });
  } else {
    let mut hit = None;
    if dim >= 2 && dim.is_multiple_of(2) {
      let n = dim / 2;
      hit = special_form(&ring, &square, n, field, &mut ctx.refusals, &name)?;
      if hit.is_none() {
        hit = main_form(&ring, &square, n, field, &mut ctx.refusals, &name)?;
      }
    } else {
      for rule in [Rule::ThmSpecial, Rule::ThmMain] {
        ctx.refusals.push(Refusal {
          rule,
          subject: name.clone(),
          reason: format!("dimension {dim} is not a positive even number 2n"),
        });
      }
    }
    let (product, theorem) = match hit {
      Some(h) => (Some(h.product), Some((h.rule, h.witness))),
      None => {
        let outcome = weighted_search(&ring, &square, limits)?;
        weighted_report = outcome.report;
        (outcome.witness, None)
      },
    };
    match product {
      Some(p) => {
        weighted_bound = p.weight;
        let mut step = Step::new(Rule::WeightedLower, name.clone())
          .inputs(
            p.factors
              .iter()
              .map(|f| match f {
                WitnessFactor::Atoroidal { class, exponent } => format!("wgt({class}-bar^{exponent}) >= {}", 2 * exponent),
                WitnessFactor::ZeroDivisor { basis } => format!("wgt({}-bar) >= 1", ring.label(*basis)),
              })
              .collect::<Vec<_>>(),
          )
          .outputs([format!("TC >= {}", p.weight)]);
        step.bound = Some(p.weight);
        step.witness = Some(Witness::Product(p));
        ctx.steps.push(step);
        route = Route::Weighted;
        if let Some((rule, witness)) = theorem {
          let mut step = Step::new(rule, name.clone())
            .inputs(theorem_inputs(rule, &witness, field))
            .outputs([format!("TC = {upper}")]);
          step.bound = Some(4 * witness.n);
          step.witness = Some(Witness::Theorem(witness));
          ctx.steps.push(step);
          route = Route::Theorem(rule);
        }
      },
      None => ctx.refusals.push(Refusal {
        rule:    Rule::WeightedLower,
        subject: name.clone(),
        reason:  "every product of atoroidal zero-divisors vanishes or needs unknown products".into(),
      }),
    }
  }

  let depth = limits.depth.unwrap_or(upper).min(square.top_degree());
  let zd = if weighted_bound == upper {
    SearchOutcome { bound: 0, witness: None, report: SearchReport { skipped: true, ..SearchReport::default() } }
  } else {
    zero_divisor_search(&ring, &square, depth, limits.work_budget)?
  };
  if let Some(w) = zd.witness.clone() {
    let mut step = Step::new(Rule::ZdProductLower, name.clone())
      .inputs(
        w.factors
          .iter()
          .map(|f| match f {
            WitnessFactor::ZeroDivisor { basis } => format!("{}-bar", ring.label(*basis)),
            WitnessFactor::Atoroidal { class, .. } => class.clone(),
          })
          .collect::<Vec<_>>(),
      )
      .outputs([format!("TC >= {}", w.weight)]);
    step.bound = Some(w.weight);
    step.witness = Some(Witness::Product(w));
    ctx.steps.push(step);
  }
  if zd.bound > weighted_bound {
    route = Route::ZeroDivisor;
  }

  let lower = weighted_bound.max(zd.bound);
  if lower > upper {
    return Err(EngineError::Inconsistent(format!("lower bound {lower} exceeds upper bound {upper}")));
  }
  Ok(Certificate {
    space: name,
    field,
    dimension: dim,
    ring,
    square,
    steps: ctx.steps,
    refusals: ctx.refusals,
    lower,
    upper,
    exact: lower == upper,
    route,
    depth,
    weighted: weighted_report,
    zero_div: zd.report,
  })
}

fn theorem_inputs(rule: Rule, w: &TheoremWitness, field: FieldSpec) -> Vec<String> {
  let mut v = vec![format!("dim = 2n, n = {}", w.n), format!("characteristic {}", field.characteristic())];
  let atoroidal: BTreeSet<&String> = w.classes.iter().collect();
  for c in atoroidal {
    v.push(format!("{c} atoroidal, degree 2"));
  }
  match rule {
    Rule::ThmSpecial => {
      v.push("u_j^2 = 0 for every chosen class".into());
      v.push(format!("{} != 0", w.classes.join("*")));
    },
    _ => {
      v.push(format!("{}^{} != 0", w.classes[0], w.n));
      if let Some(c) = &w.component_check {
        v.push(format!("(2n,2n)-component coefficient {} (matches: {})", c.coefficient, c.matches));
      }
    },
  }
  v
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::builders::{self, AssertionSet, ClassSpec, GroupPresentation};

  fn q() -> FieldSpec { FieldSpec::rationals() }

  fn f(p: u64) -> FieldSpec { FieldSpec::new(p).unwrap() }

  fn genus_two() -> Space {
    builders::presentation_complex("genus2", GroupPresentation::new(&["a", "b", "c", "d"], &["abABcdCD"]).unwrap())
      .with_assertions(AssertionSet::surface_group("surface group"))
      .with_marked(vec![ClassSpec::generator("u", 2)])
  }

  #[test]
  fn upper_bounds() {
    assert_eq!(upper_bound_dimension(&genus_two()).bound, Some(4));
    let x = builders::product(vec![genus_two(), genus_two(), genus_two()]).unwrap();
    assert_eq!(upper_bound_dimension(&x).bound, Some(12));
    assert_eq!(upper_bound_dimension(&builders::bundled("point").unwrap()).bound, Some(0));
  }

  #[test]
  fn promotion_rules() {
    assert!(promote_atoroidal(&genus_two(), "u", 2, f(5)).is_ok());

    let torus = builders::bundled("torus").unwrap().with_assertions(AssertionSet {
      two_aspherical: true,
      ..AssertionSet::default()
    });
    let r = promote_atoroidal(&torus, "u", 2, q()).unwrap_err();
    assert!(r.reason.contains("Z^2"), "{}", r.reason);

    let no_tf = builders::bundled("genus2").unwrap().with_assertions(AssertionSet {
      two_aspherical: true,
      pi1_no_z2: true,
      ..AssertionSet::default()
    });
    assert!(promote_atoroidal(&no_tf, "u", 2, q()).is_ok());
    let r = promote_atoroidal(&no_tf, "u", 2, f(5)).unwrap_err();
    assert!(r.reason.contains("torsion-free"));
  }

  #[test]
  fn genus_two_weighted() {
    let out = weighted_lower_bound(&genus_two(), q(), &SearchLimits::default()).unwrap();
    assert_eq!(out.bound, 4);
  }

  #[test]
  fn zero_divisor_bounds() {
    let limits = SearchLimits::default();
    assert_eq!(zd_product_lower_bound(&builders::bundled("torus").unwrap(), q(), &limits).unwrap().bound, 2);
    assert_eq!(zd_product_lower_bound(&builders::bundled("circle").unwrap(), q(), &limits).unwrap().bound, 1);
    assert_eq!(zd_product_lower_bound(&builders::bundled("point").unwrap(), q(), &limits).unwrap().bound, 0);
  }

  #[test]
  fn genus_two_certificate() {
    let c = certify(&genus_two(), q()).unwrap();
    assert_eq!((c.lower, c.upper, c.exact), (4, 4, true));
    assert_eq!(c.route, Route::Theorem(Rule::ThmSpecial));
  }

  #[test]
  fn torus_interval() {
    let torus = builders::bundled("torus").unwrap().with_marked(vec![ClassSpec::generator("u", 2)]).with_assertions(
      AssertionSet { aspherical_space: true, pi1_torsion_free: true, ..AssertionSet::default() },
    );
    let c = certify(&torus, q()).unwrap();
    assert_eq!((c.lower, c.upper, c.exact), (2, 4, false));
    assert!(c.refusals.iter().any(|r| r.rule == Rule::AtoroidalPromotion));
  }

  #[test]
  fn combinations_lexicographic() {
    assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
  }
}
