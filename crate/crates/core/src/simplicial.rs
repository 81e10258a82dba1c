//! Ordered simplicial complexes and the Alexander–Whitney cup product.
//!
//! Vertices are globally ordered by index and every simplex is stored as a
//! strictly increasing vertex list, so the front and back faces used by the
//! cup product are well defined without further choices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{ChainComplexData, CohomologyBasis, IntMatrix};
use crate::error::{BuildError, SimplicialError};
use crate::field::{FieldSpec, Scalar};
use crate::ring::{AlgebraBuilder, GradedAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
  vertex_count: usize,
  facets:       Vec<Vec<usize>>,
  faces:        Vec<Vec<Vec<usize>>>,
  index:        Vec<BTreeMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
  /// Builds the face lattice; every vertex `0..vertex_count` is a 0-simplex.
  pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self, SimplicialError> {
    let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![(0..vertex_count).map(|v| vec![v]).collect()];
    for (index, facet) in facets.iter().enumerate() {
      if facet.is_empty() || facet.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SimplicialError::UnorderedFacet { index });
      }
      if let Some(&vertex) = facet.iter().find(|&&v| v >= vertex_count) {
        return Err(SimplicialError::VertexOutOfRange { index, vertex, count: vertex_count });
      }
      let k = facet.len();
      // all nonempty sub-lists of the facet, kept in order
      for mask in 1u64..(1u64 << k) {
        let face: Vec<usize> = (0..k).filter(|i| (mask >> i) & 1 == 1).map(|i| facet[i]).collect();
        let d = face.len() - 1;
        if by_dim.len() <= d {
          by_dim.resize_with(d + 1, BTreeSet::new);
        }
        by_dim[d].insert(face);
      }
    }
    let faces: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
    let index = faces.iter().map(|fs| fs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect()).collect();
    Ok(Self { vertex_count, facets, faces, index })
  }

  pub fn vertex_count(&self) -> usize { self.vertex_count }

  pub fn facets(&self) -> &[Vec<usize>] { &self.facets }

  pub fn dimension(&self) -> usize { self.faces.len().saturating_sub(1) }

  /// The `k`-simplices in lexicographic order.
  pub fn simplices(&self, k: usize) -> &[Vec<usize>] { self.faces.get(k).map_or(&[], Vec::as_slice) }

  pub fn count(&self, k: usize) -> usize { self.simplices(k).len() }

  pub fn position(&self, simplex: &[usize]) -> Option<usize> {
    self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
  }

  pub fn euler_characteristic(&self) -> i64 {
    (0..self.faces.len()).map(|k| if k % 2 == 0 { self.count(k) as i64 } else { -(self.count(k) as i64) }).sum()
  }

  /// Simplicial chain complex with the alternating-sign boundary.
  pub fn to_chain_complex(&self) -> ChainComplexData {
    let dims: Vec<usize> = self.faces.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for k in 1..dims.len() {
      let mut m = IntMatrix::zeros(dims[k - 1], dims[k]);
      for (j, s) in self.faces[k].iter().enumerate() {
        for i in 0..s.len() {
          let mut face = s.clone();
          face.remove(i);
          let row = self.index[k - 1][&face];
          m.set(row, j, if i % 2 == 0 { 1 } else { -1 });
        }
      }
      boundaries.push(m);
    }
    ChainComplexData::new(dims, boundaries).expect("simplicial boundary squares to zero")
  }

  /// Cup product `(α∪β)(σ) = α(front p-face)·β(back q-face)`.
  pub fn cup(&self, alpha: &Cochain, beta: &Cochain) -> Result<Cochain, SimplicialError> {
    self.check(alpha)?;
    self.check(beta)?;
    if alpha.field != beta.field {
      return Err(SimplicialError::FieldMismatch);
    }
    let (p, q) = (alpha.degree, beta.degree);
    let d = p + q;
    let values = self
      .simplices(d)
      .iter()
      .map(|s| {
        let a = &alpha.values[self.index[p][&s[..=p]]];
        if a.is_zero() {
          return alpha.field.zero();
        }
        a * &beta.values[self.index[q][&s[p..]]]
      })
      .collect();
    Ok(Cochain { degree: d, field: alpha.field, values })
  }

  /// `(δα)(σ) = Σ (-1)^i α(d_i σ)`.
  pub fn coboundary(&self, alpha: &Cochain) -> Result<Cochain, SimplicialError> {
    self.check(alpha)?;
    let k = alpha.degree;
    let values = self
      .simplices(k + 1)
      .iter()
      .map(|s| {
        let mut acc = alpha.field.zero();
        for i in 0..s.len() {
          let mut face = s.clone();
          face.remove(i);
          let v = &alpha.values[self.index[k][&face]];
          if i % 2 == 0 {
            acc += v;
          } else {
            acc -= v;
          }
        }
        acc
      })
      .collect();
    Ok(Cochain { degree: k + 1, field: alpha.field, values })
  }

  fn check(&self, c: &Cochain) -> Result<(), SimplicialError> {
    let expected = self.count(c.degree);
    if c.values.len() != expected {
      return Err(SimplicialError::CochainLength { degree: c.degree, expected, got: c.values.len() });
    }
    Ok(())
  }

  /// `H*(X; field)` as an algebra, with the cocycle bases used to build it.
  pub fn cohomology_ring_with_bases(&self, field: FieldSpec) -> Result<CohomologyRing, SimplicialError> {
    let cc = self.to_chain_complex();
    let top = cc.top_degree();
    let mut bases = Vec::with_capacity(top + 1);
    for k in 0..=top {
      bases.push(cc.cohomology(field, k)?);
    }
    if bases[0].dimension() != 1 {
      return Err(SimplicialError::NotConnected(bases[0].dimension()));
    }
    bases[0].replace_representative(0, vec![field.one(); self.vertex_count]);

    let dims: Vec<usize> = bases.iter().map(CohomologyBasis::dimension).collect();
    let mut offsets = vec![0];
    for d in &dims {
      offsets.push(offsets.last().unwrap() + d);
    }
    let mut labels = Vec::new();
    for (k, &d) in dims.iter().enumerate() {
      for i in 0..d {
        labels.push(if k == 0 { String::from("1") } else { format!("h{k}_{i}") });
      }
    }
    let mut builder = AlgebraBuilder::new(field, dims.clone()).labels(labels);
    for p in 1..=top {
      for q in 1..=top - p {
        if dims[p + q] == 0 {
          continue;
        }
        for (i, a) in bases[p].representatives().iter().enumerate() {
          for (j, b) in bases[q].representatives().iter().enumerate() {
            let alpha = Cochain::new(p, field, a.clone());
            let beta = Cochain::new(q, field, b.clone());
            let prod = self.cup(&alpha, &beta)?;
            let coords = bases[p + q].project(&prod.values)?;
            let sparse = coords.into_iter().enumerate().map(|(t, c)| (offsets[p + q] + t, c)).collect();
            builder.product(offsets[p] + i, offsets[q] + j, sparse);
          }
        }
      }
    }
    Ok(CohomologyRing { algebra: builder.build()?, bases })
  }

  pub fn cohomology_ring(&self, field: FieldSpec) -> Result<GradedAlgebra, SimplicialError> {
    Ok(self.cohomology_ring_with_bases(field)?.algebra)
  }
}

/// Cohomology ring together with the representative cocycles of its basis.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
  pub algebra: GradedAlgebra,
  pub bases:   Vec<CohomologyBasis>,
}

/// A simplicial cochain: one coefficient per `k`-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
  degree: usize,
  field:  FieldSpec,
  values: Vec<Scalar>,
}

impl Cochain {
  pub fn new(degree: usize, field: FieldSpec, values: Vec<Scalar>) -> Self {
    debug_assert!(values.iter().all(|v| field.contains(v)));
    Self { degree, field, values }
  }

  pub fn zero(sc: &SimplicialComplex, degree: usize, field: FieldSpec) -> Self {
    Self { degree, field, values: vec![field.zero(); sc.count(degree)] }
  }

  /// The constant 0-cochain 1, representing the unit of the ring.
  pub fn unit(sc: &SimplicialComplex, field: FieldSpec) -> Self {
    Self { degree: 0, field, values: vec![field.one(); sc.vertex_count()] }
  }

  pub fn degree(&self) -> usize { self.degree }

  pub fn field(&self) -> FieldSpec { self.field }

  pub fn values(&self) -> &[Scalar] { &self.values }

  pub fn add(&self, other: &Cochain) -> Cochain {
    assert_eq!(self.degree, other.degree);
    let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
    Cochain { degree: self.degree, field: self.field, values }
  }

  pub fn scale(&self, s: &Scalar) -> Cochain {
    Cochain { degree: self.degree, field: self.field, values: self.values.iter().map(|v| v * s).collect() }
  }

  pub fn is_zero(&self) -> bool { self.values.iter().all(Scalar::is_zero) }
}

/// Names accepted by [`fixture`].
pub const BUNDLED_NAMES: [&str; 7] = ["point", "circle", "disk", "sphere", "torus", "rp2", "genus2"];

/// Standard small triangulations used as fixtures.
pub fn fixture(name: &str) -> Result<SimplicialComplex, BuildError> {
  let (n, facets): (usize, Vec<Vec<usize>>) = match name {
    "point" => (1, vec![vec![0]]),
    "circle" => (3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]),
    "disk" => (3, vec![vec![0, 1, 2]]),
    // boundary of the tetrahedron
    "sphere" => (4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]),
    "torus" => (7, torus_facets()),
    "rp2" => (6, vec![
      vec![0, 1, 2],
      vec![0, 2, 3],
      vec![0, 3, 4],
      vec![0, 4, 5],
      vec![0, 1, 5],
      vec![1, 2, 4],
      vec![1, 3, 4],
      vec![1, 3, 5],
      vec![2, 3, 5],
      vec![2, 4, 5],
    ]),
    "genus2" => (11, genus_two_facets()),
    _ => return Err(BuildError::UnknownBundled(name.into())),
  };
  Ok(SimplicialComplex::new(n, facets)?)
}

/// Möbius' 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
fn torus_facets() -> Vec<Vec<usize>> {
  let mut out = Vec::new();
  for i in 0..7 {
    for offsets in [[0, 1, 3], [0, 2, 3]] {
      let mut f: Vec<usize> = offsets.iter().map(|o| (i + o) % 7).collect();
      f.sort_unstable();
      out.push(f);
    }
  }
  out.sort();
  out
}

/// Connected sum of two 7-vertex tori along the triangle {0, 1, 3}.
fn genus_two_facets() -> Vec<Vec<usize>> {
  let removed = vec![0, 1, 3];
  let relabel = |v: usize| match v {
    0 | 1 | 3 => v,
    2 => 7,
    v => v + 4,
  };
  let mut out: Vec<Vec<usize>> = torus_facets().into_iter().filter(|f| *f != removed).collect();
  for f in torus_facets().into_iter().filter(|f| *f != removed) {
    let mut g: Vec<usize> = f.into_iter().map(relabel).collect();
    g.sort_unstable();
    out.push(g);
  }
  out.sort();
  out
}

#[cfg(test)]
mod tests {
  use alloc::sync::Arc;

  use super::*;

  fn q() -> FieldSpec { FieldSpec::rationals() }

  fn f2() -> FieldSpec { FieldSpec::new(2).unwrap() }

  #[test]
  fn face_counts() {
    let tri = fixture("disk").unwrap().to_chain_complex();
    assert_eq!(tri.dims(), &[3, 3, 1]);
    let torus = fixture("torus").unwrap();
    assert_eq!(torus.to_chain_complex().dims(), &[7, 21, 14]);
    assert_eq!(torus.euler_characteristic(), 0);
    assert_eq!(fixture("sphere").unwrap().euler_characteristic(), 2);
    assert_eq!(fixture("genus2").unwrap().euler_characteristic(), -2);
    assert_eq!(fixture("rp2").unwrap().euler_characteristic(), 1);
  }

  #[test]
  fn bundled_betti_numbers() {
    let cases: [(&str, FieldSpec, &[usize]); 8] = [
      ("circle", q(), &[1, 1]),
      ("torus", q(), &[1, 2, 1]),
      ("torus", f2(), &[1, 2, 1]),
      ("genus2", q(), &[1, 4, 1]),
      ("genus2", f2(), &[1, 4, 1]),
      ("rp2", q(), &[1, 0, 0]),
      ("rp2", f2(), &[1, 1, 1]),
      ("sphere", q(), &[1, 0, 1]),
    ];
    for (name, field, expected) in cases {
      let cc = fixture(name).unwrap().to_chain_complex();
      assert_eq!(cc.betti_profile(field), expected, "{name} over {field}");
    }
  }

  #[test]
  fn unknown_fixture() { assert!(matches!(fixture("nonexistent"), Err(BuildError::UnknownBundled(_)))); }

  #[test]
  fn bad_facets() {
    assert!(matches!(SimplicialComplex::new(3, vec![vec![1, 0]]), Err(SimplicialError::UnorderedFacet { index: 0 })));
    assert!(matches!(
      SimplicialComplex::new(2, vec![vec![0, 2]]),
      Err(SimplicialError::VertexOutOfRange { vertex: 2, .. })
    ));
  }

  #[test]
  fn unit_law() {
    let sc = fixture("torus").unwrap();
    let one = Cochain::unit(&sc, q());
    let alpha = Cochain::new(1, q(), (0..21).map(|i| q().from_i64(i as i64 - 7)).collect());
    assert_eq!(sc.cup(&one, &alpha).unwrap(), alpha);
    assert_eq!(sc.cup(&alpha, &one).unwrap(), alpha);
  }

  #[test]
  fn cup_beyond_dimension_is_empty() {
    let sc = fixture("circle").unwrap();
    let a = Cochain::new(1, q(), vec![q().one(); 3]);
    let c = sc.cup(&a, &a).unwrap();
    assert_eq!(c.degree(), 2);
    assert!(c.values().is_empty());
  }

  #[test]
  fn field_mismatch() {
    let sc = fixture("circle").unwrap();
    let a = Cochain::new(1, q(), vec![q().one(); 3]);
    let b = Cochain::new(0, f2(), vec![f2().one(); 3]);
    assert_eq!(sc.cup(&a, &b), Err(SimplicialError::FieldMismatch));
  }

  #[test]
  fn circle_ring() {
    let ring = fixture("circle").unwrap().cohomology_ring(q()).unwrap();
    assert_eq!(ring.dims(), &[1, 1]);
    assert!(ring.mul_basis(1, 1).unwrap().is_empty());
  }

  #[test]
  fn rp2_generator_squares_nontrivially() {
    let ring = Arc::new(fixture("rp2").unwrap().cohomology_ring(f2()).unwrap());
    assert_eq!(ring.dims(), &[1, 1, 1]);
    let w = ring.basis_element(1);
    assert!(!w.multiply(&w).unwrap().is_zero());
  }

  #[test]
  fn disconnected_complex_has_no_ring() {
    let sc = SimplicialComplex::new(2, vec![vec![0], vec![1]]).unwrap();
    assert!(matches!(sc.cohomology_ring(q()), Err(SimplicialError::NotConnected(2))));
  }
}
