//! Exact checks of the chain-level combinatorics behind the weight-2 argument:
//! the prism decomposition of `Δ_k × [0,1]` with its boundary identity, and
//! the four-simplex fundamental cycle of the torus.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

/// Integer formal linear combination with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalChain<K: Ord> {
  terms: BTreeMap<K, i64>,
}

impl<K: Ord + Clone> FormalChain<K> {
  pub fn new() -> Self { Self { terms: BTreeMap::new() } }

  pub fn add_term(&mut self, key: K, coeff: i64) {
    if coeff == 0 {
      return;
    }
    let entry = self.terms.entry(key.clone()).or_insert(0);
    *entry += coeff;
    if *entry == 0 {
      self.terms.remove(&key);
    }
  }

  pub fn add_chain(&mut self, other: &Self, scale: i64) {
    for (k, c) in &other.terms {
      self.add_term(k.clone(), scale * c);
    }
  }

  pub fn coefficient(&self, key: &K) -> i64 { self.terms.get(key).copied().unwrap_or(0) }

  pub fn terms(&self) -> impl Iterator<Item = (&K, i64)> { self.terms.iter().map(|(k, c)| (k, *c)) }

  pub fn len(&self) -> usize { self.terms.len() }

  pub fn is_empty(&self) -> bool { self.terms.is_empty() }
}

/// Vertex `(v_i, level)` of `Δ_k × {0, 1}`.
pub type PrismVertex = (usize, u8);

/// Simplex `j` of the staircase decomposition:
/// `(v_0,0), …, (v_j,0), (v_j,1), …, (v_k,1)`.
pub fn prism_simplices(k: usize) -> Vec<Vec<PrismVertex>> { prism_over(&(0..=k).collect::<Vec<_>>()) }

fn prism_over(vertices: &[usize]) -> Vec<Vec<PrismVertex>> {
  (0..vertices.len())
    .map(|j| {
      let mut s: Vec<PrismVertex> = vertices[..=j].iter().map(|&v| (v, 0)).collect();
      s.extend(vertices[j..].iter().map(|&v| (v, 1)));
      s
    })
    .collect()
}

fn prism_chain(vertices: &[usize], flip: Option<usize>) -> FormalChain<Vec<PrismVertex>> {
  let mut c = FormalChain::new();
  for (j, s) in prism_over(vertices).into_iter().enumerate() {
    let sign = if j % 2 == 0 { 1 } else { -1 };
    c.add_term(s, if flip == Some(j) { -sign } else { sign });
  }
  c
}

fn boundary<V: Ord + Clone>(chain: &FormalChain<Vec<V>>) -> (FormalChain<Vec<V>>, usize) {
  let mut out = FormalChain::new();
  let mut raw = 0;
  for (s, c) in chain.terms() {
    if s.len() < 2 {
      continue;
    }
    for i in 0..s.len() {
      let mut face = s.clone();
      face.remove(i);
      out.add_term(face, if i % 2 == 0 { c } else { -c });
      raw += 1;
    }
  }
  (out, raw)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrismReport {
  pub k:                  usize,
  /// Terms of `∂P(Δ_k)` before cancellation.
  pub raw_terms:          usize,
  pub holds:              bool,
  /// `∂P(Δ_k) + P(∂Δ_k) − top + bottom`, empty when the identity holds.
  pub uncancelled:        Vec<(Vec<PrismVertex>, i64)>,
}

/// Checks `∂P(Δ_k) + P(∂Δ_k) = Δ_k × 1 − Δ_k × 0`. `flip` negates one
/// simplex of `P(Δ_k)` (negative control).
pub fn verify_prism_identity(k: usize, flip: Option<usize>) -> PrismReport {
  let vertices: Vec<usize> = (0..=k).collect();
  let (mut lhs, raw_terms) = boundary(&prism_chain(&vertices, flip));
  for i in 0..vertices.len() {
    if vertices.len() < 2 {
      break;
    }
    let mut face = vertices.clone();
    face.remove(i);
    lhs.add_chain(&prism_chain(&face, None), if i % 2 == 0 { 1 } else { -1 });
  }
  lhs.add_term(vertices.iter().map(|&v| (v, 1)).collect(), -1);
  lhs.add_term(vertices.iter().map(|&v| (v, 0)).collect(), 1);
  let uncancelled: Vec<_> = lhs.terms().map(|(s, c)| (s.clone(), c)).collect();
  PrismReport { k, raw_terms, holds: uncancelled.is_empty(), uncancelled }
}

/// Point of `Δ_k × [0,1] ⊂ ℚ^{k+1}` with `v_0 = 0`, `v_i = e_i`, level in the last coordinate.
fn embed(k: usize, (v, level): PrismVertex) -> Vec<Rational64> {
  let mut p = vec![Rational64::zero(); k + 1];
  if v > 0 {
    p[v - 1] = Rational64::one();
  }
  p[k] = Rational64::from_integer(i64::from(level));
  p
}

#[allow(clippy::needless_range_loop)]
fn determinant(mut m: Vec<Vec<Rational64>>) -> Rational64 {
  let n = m.len();
  let mut det = Rational64::one();
  for col in 0..n {
    let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else { return Rational64::zero() };
    if pivot != col {
      m.swap(pivot, col);
      det = -det;
    }
    det *= m[col][col];
    for r in col + 1..n {
      let factor = m[r][col] / m[col][col];
      for c in col..n {
        let delta = factor * m[col][c];
        m[r][c] -= delta;
      }
    }
  }
  det
}

/// Barycentric coordinates of `x` in the full-dimensional simplex `pts`.
#[allow(clippy::needless_range_loop)]
fn barycentric(pts: &[Vec<Rational64>], x: &[Rational64]) -> Option<Vec<Rational64>> {
  let d = x.len();
  // augmented system: columns p_i − p_0, right-hand side x − p_0
  let mut m: Vec<Vec<Rational64>> =
    (0..d).map(|r| (1..=d).map(|i| pts[i][r] - pts[0][r]).chain([x[r] - pts[0][r]]).collect()).collect();
  for col in 0..d {
    let pivot = (col..d).find(|&r| !m[r][col].is_zero())?;
    m.swap(pivot, col);
    let inv = m[col][col].recip();
    for c in col..=d {
      m[col][c] *= inv;
    }
    for r in 0..d {
      if r != col && !m[r][col].is_zero() {
        let factor = m[r][col];
        for c in col..=d {
          let delta = factor * m[col][c];
          m[r][c] -= delta;
        }
      }
    }
  }
  let lambda: Vec<Rational64> = (0..d).map(|r| m[r][d]).collect();
  let first = Rational64::one() - lambda.iter().fold(Rational64::zero(), |a, b| a + b);
  Some([first].into_iter().chain(lambda).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeReport {
  pub k:        usize,
  pub volumes:  Vec<Rational64>,
  pub total:    Rational64,
  /// `vol(Δ_k × [0,1]) = 1/k!`.
  pub expected: Rational64,
  /// Pairs `(i, j)` where the barycenter of simplex `i` lies in simplex `j`.
  pub overlaps: Vec<(usize, usize)>,
  pub holds:    bool,
}

/// Exact volumes of the prism simplices and a barycenter separation test.
pub fn verify_prism_volumes(k: usize) -> VolumeReport {
  let simplices: Vec<Vec<Vec<Rational64>>> =
    prism_simplices(k).into_iter().map(|s| s.into_iter().map(|v| embed(k, v)).collect()).collect();
  let factorial = |n: usize| (1..=n as i64).product::<i64>();
  let volumes: Vec<Rational64> = simplices
    .iter()
    .map(|pts| {
      let edges = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
      determinant(edges).abs() / Rational64::from_integer(factorial(k + 1))
    })
    .collect();
  let total = volumes.iter().fold(Rational64::zero(), |a, b| a + b);
  let expected = Rational64::new(1, factorial(k));
  let mut overlaps = Vec::new();
  for (i, pts) in simplices.iter().enumerate() {
    let n = Rational64::from_integer(pts.len() as i64);
    let center: Vec<Rational64> =
      (0..=k).map(|c| pts.iter().fold(Rational64::zero(), |a, p| a + p[c]) / n).collect();
    for (j, other) in simplices.iter().enumerate() {
      if i != j && barycentric(other, &center).is_some_and(|l| l.iter().all(|x| !x.is_negative())) {
        overlaps.push((i, j));
      }
    }
  }
  let holds = total == expected && overlaps.is_empty() && volumes.iter().all(|v| !v.is_zero());
  VolumeReport { k, volumes, total, expected, overlaps, holds }
}

/// Affine singular simplex in `T² = ℝ²/ℤ²`: base point mod `ℤ²` and exact
/// edge vectors. Equal as singular simplices iff both agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineSimplexInTorus {
  base:  [Rational64; 2],
  edges: Vec<[Rational64; 2]>,
}

fn frac(x: Rational64) -> Rational64 { x - x.floor() }

impl AffineSimplexInTorus {
  pub fn from_vertices(vertices: &[[Rational64; 2]]) -> Self {
    let v0 = vertices[0];
    Self {
      base:  [frac(v0[0]), frac(v0[1])],
      edges: vertices[1..].iter().map(|v| [v[0] - v0[0], v[1] - v0[1]]).collect(),
    }
  }

  pub fn base(&self) -> [Rational64; 2] { self.base }

  pub fn edges(&self) -> &[[Rational64; 2]] { &self.edges }

  pub fn dimension(&self) -> usize { self.edges.len() }

  fn vertices(&self) -> Vec<[Rational64; 2]> {
    let b = self.base;
    core::iter::once(b).chain(self.edges.iter().map(|e| [b[0] + e[0], b[1] + e[1]])).collect()
  }

  pub fn face(&self, i: usize) -> Self {
    let mut v = self.vertices();
    v.remove(i);
    Self::from_vertices(&v)
  }

  /// `det(e_1, e_2)` for a 2-simplex.
  pub fn determinant(&self) -> Rational64 {
    let [a, b] = [self.edges[0], self.edges[1]];
    a[0] * b[1] - a[1] * b[0]
  }
}

impl fmt::Display for AffineSimplexInTorus {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "base ({}, {})", self.base[0], self.base[1])?;
    for e in &self.edges {
      write!(f, " edge ({}, {})", e[0], e[1])?;
    }
    Ok(())
  }
}

fn pt(x: (i64, i64), y: (i64, i64)) -> [Rational64; 2] { [Rational64::new(x.0, x.1), Rational64::new(y.0, y.1)] }

/// The simplices `σ_{j,k}` in order `(1,0), (1,1), (2,0), (2,1)` with signs `(−1)^{j+1+k}`.
pub fn torus_simplices() -> Vec<(AffineSimplexInTorus, i64)> {
  let table = [
    (1, 0, [pt((0, 1), (0, 1)), pt((0, 1), (1, 2)), pt((1, 1), (1, 2))]),
    (1, 1, [pt((0, 1), (0, 1)), pt((1, 1), (0, 1)), pt((1, 1), (1, 2))]),
    (2, 0, [pt((0, 1), (1, 1)), pt((0, 1), (1, 2)), pt((1, 1), (1, 2))]),
    (2, 1, [pt((0, 1), (1, 1)), pt((1, 1), (1, 1)), pt((1, 1), (1, 2))]),
  ];
  table
    .into_iter()
    .map(|(j, k, v)| (AffineSimplexInTorus::from_vertices(&v), if (j + 1 + k) % 2 == 0 { 1 } else { -1 }))
    .collect()
}

pub fn torus_cycle() -> FormalChain<AffineSimplexInTorus> {
  let mut c = FormalChain::new();
  for (s, sign) in torus_simplices() {
    c.add_term(s, sign);
  }
  c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusReport {
  pub is_cycle:    bool,
  pub uncancelled: Vec<(AffineSimplexInTorus, i64)>,
  /// `Σ sign · det / 2!` relative to the unit square.
  pub degree:      Rational64,
  pub holds:       bool,
}

/// `∂τ = 0` and `|deg τ| = 1`; `flip` negates one table sign.
pub fn verify_torus_cycle(flip: Option<usize>) -> TorusReport {
  let mut boundary = FormalChain::new();
  let mut twice_degree = Rational64::zero();
  for (idx, (s, mut sign)) in torus_simplices().into_iter().enumerate() {
    if flip == Some(idx) {
      sign = -sign;
    }
    for i in 0..=s.dimension() {
      boundary.add_term(s.face(i), if i % 2 == 0 { sign } else { -sign });
    }
    twice_degree += s.determinant() * Rational64::from_integer(sign);
  }
  let degree = twice_degree / Rational64::from_integer(2);
  let uncancelled: Vec<_> = boundary.terms().map(|(s, c)| (s.clone(), c)).collect();
  let is_cycle = uncancelled.is_empty();
  TorusReport { is_cycle, uncancelled, degree, holds: is_cycle && degree.abs() == Rational64::one() }
}

/// A single sign flip injected into one of the checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
  Prism { k: usize, simplex: usize },
  Torus { term: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
  pub name:   String,
  pub passed: bool,
  pub detail: String,
}

/// Prism identity for `k ≤ max_k`, volumes for `k ≤ min(max_k, 3)`, torus cycle.
pub fn run_all(max_k: usize, fault: Option<Fault>) -> Vec<CheckResult> {
  let mut out = Vec::new();
  for k in 0..=max_k {
    let flip = match fault {
      Some(Fault::Prism { k: fk, simplex }) if fk == k => Some(simplex),
      _ => None,
    };
    let r = verify_prism_identity(k, flip);
    let detail = match r.uncancelled.first() {
      None => format!("{} boundary terms cancel to top - bottom", r.raw_terms),
      Some((s, c)) => format!("uncancelled term {c} * {s:?} ({} in total)", r.uncancelled.len()),
    };
    out.push(CheckResult { name: format!("prism identity k={k}"), passed: r.holds, detail });
  }
  for k in 0..=max_k.min(3) {
    let r = verify_prism_volumes(k);
    out.push(CheckResult {
      name:   format!("prism volumes k={k}"),
      passed: r.holds,
      detail: format!("total {} expected {}, overlaps {:?}", r.total, r.expected, r.overlaps),
    });
  }
  let flip = match fault {
    Some(Fault::Torus { term }) => Some(term),
    _ => None,
  };
  let t = verify_torus_cycle(flip);
  let detail = match t.uncancelled.first() {
    None => "boundary vanishes".into(),
    Some((s, c)) => format!("uncancelled face {c} * [{s}] ({} in total)", t.uncancelled.len()),
  };
  out.push(CheckResult { name: "torus cycle".into(), passed: t.is_cycle, detail });
  out.push(CheckResult {
    name:   "torus degree".into(),
    passed: t.degree.abs() == Rational64::one(),
    detail: format!("degree {}", t.degree),
  });
  out
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn small_prisms() {
    assert_eq!(prism_simplices(0), vec![vec![(0, 0), (0, 1)]]);
    assert_eq!(prism_simplices(1), vec![vec![(0, 0), (0, 1), (1, 1)], vec![(0, 0), (1, 0), (1, 1)]]);
    assert_eq!(prism_simplices(2).len(), 3);
  }

  #[test]
  fn prism_identity_and_controls() {
    for k in 0..=5 {
      assert!(verify_prism_identity(k, None).holds, "k = {k}");
      for j in 0..=k {
        assert!(!verify_prism_identity(k, Some(j)).holds);
      }
    }
    assert_eq!(verify_prism_identity(3, None).raw_terms, 20);
  }

  #[test]
  fn prism_volumes_exact() {
    for k in 0..=3 {
      let r = verify_prism_volumes(k);
      assert!(r.holds, "{r:?}");
    }
    assert_eq!(verify_prism_volumes(2).volumes, vec![Rational64::new(1, 6); 3]);
  }

  #[test]
  fn torus_table() {
    let s = torus_simplices();
    assert_eq!(s[0].0.edges(), &[pt((0, 1), (1, 2)), pt((1, 1), (1, 2))]);
    assert_eq!(s[3].0.base(), pt((0, 1), (0, 1)));
    assert_eq!(s[3].0.edges(), &[pt((1, 1), (0, 1)), pt((1, 1), (-1, 2))]);
    assert_eq!(s.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, -1, -1, 1]);
    assert_eq!(torus_cycle().len(), 4);
  }

  #[test]
  fn torus_is_fundamental_cycle() {
    let r = verify_torus_cycle(None);
    assert!(r.is_cycle);
    assert_eq!(r.degree.abs(), Rational64::one());
    for i in 0..4 {
      assert!(!verify_torus_cycle(Some(i)).is_cycle);
    }
  }

  #[test]
  fn mod_lattice_equality() {
    let a = AffineSimplexInTorus::from_vertices(&[pt((0, 1), (1, 1)), pt((1, 1), (1, 1))]);
    let b = AffineSimplexInTorus::from_vertices(&[pt((0, 1), (0, 1)), pt((1, 1), (0, 1))]);
    let c = AffineSimplexInTorus::from_vertices(&[pt((1, 1), (0, 1)), pt((0, 1), (0, 1))]);
    assert_eq!(a, b);
    assert_ne!(b, c);
  }

  #[test]
  fn run_all_reports() {
    assert!(run_all(4, None).iter().all(|c| c.passed));
    assert_eq!(run_all(0, None).iter().filter(|c| c.name.starts_with("prism identity")).count(), 1);
    assert!(run_all(4, Some(Fault::Prism { k: 2, simplex: 1 })).iter().any(|c| !c.passed));
    assert!(run_all(4, Some(Fault::Torus { term: 3 })).iter().any(|c| !c.passed));
  }
}
