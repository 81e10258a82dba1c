//! Finite based chain complexes over ℤ and their cohomology over a field.
//!
//! Cochains use the dual basis of cells, so the coboundary `δ_k` is the
//! transpose of `∂_{k+1}` reduced into the coefficient field.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::ChainError;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Matrix};

/// Integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
  rows:    usize,
  cols:    usize,
  entries: Vec<i64>,
}

impl IntMatrix {
  pub fn zeros(rows: usize, cols: usize) -> Self { Self { rows, cols, entries: vec![0; rows * cols] } }

  /// From explicit rows; an empty slice means a `0 x cols` matrix.
  pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
    let mut m = Self::zeros(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
      assert_eq!(row.len(), cols, "ragged integer matrix");
      m.entries[i * cols..(i + 1) * cols].copy_from_slice(row);
    }
    m
  }

  pub fn rows(&self) -> usize { self.rows }

  pub fn cols(&self) -> usize { self.cols }

  pub fn get(&self, i: usize, j: usize) -> i64 { self.entries[i * self.cols + j] }

  pub fn set(&mut self, i: usize, j: usize, v: i64) { self.entries[i * self.cols + j] = v; }

  pub fn to_rows(&self) -> Vec<Vec<i64>> {
    (0..self.rows).map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
  }

  /// Reduction into `field`.
  pub fn over(&self, field: FieldSpec) -> Matrix {
    let mut m = Matrix::zeros(field, self.rows, self.cols);
    for i in 0..self.rows {
      for j in 0..self.cols {
        let v = self.get(i, j);
        if v != 0 {
          m.set(i, j, field.from_i64(v));
        }
      }
    }
    m
  }

  fn compose_is_zero(&self, inner: &IntMatrix) -> bool {
    // self: C_{k-1} <- C_k, inner: C_k <- C_{k+1}
    for i in 0..self.rows {
      for j in 0..inner.cols {
        let mut acc: i128 = 0;
        for k in 0..self.cols {
          acc += self.get(i, k) as i128 * inner.get(k, j) as i128;
        }
        if acc != 0 {
          return false;
        }
      }
    }
    true
  }
}

/// Cell counts per degree plus integral boundary matrices `∂_k : C_k → C_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexData {
  dims:       Vec<usize>,
  boundaries: Vec<IntMatrix>,
  labels:     Option<Vec<Vec<String>>>,
}

impl ChainComplexData {
  /// `boundaries[k - 1]` is `∂_k`, of shape `dims[k-1] x dims[k]`.
  pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, ChainError> {
    let cc = Self { dims, boundaries, labels: None };
    cc.validate()?;
    Ok(cc)
  }

  pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
    self.labels = Some(labels);
    self
  }

  /// Checks matrix shapes and `∂_{k-1} ∘ ∂_k = 0` over ℤ.
  pub fn validate(&self) -> Result<(), ChainError> {
    let expected = self.dims.len().saturating_sub(1);
    if self.boundaries.len() != expected {
      return Err(ChainError::BoundaryCount { expected, got: self.boundaries.len() });
    }
    for (i, b) in self.boundaries.iter().enumerate() {
      let k = i + 1;
      if b.rows != self.dims[k - 1] || b.cols != self.dims[k] {
        return Err(ChainError::ShapeMismatch {
          degree:        k,
          rows:          b.rows,
          cols:          b.cols,
          expected_rows: self.dims[k - 1],
          expected_cols: self.dims[k],
        });
      }
    }
    for k in 1..self.boundaries.len() {
      if !self.boundaries[k - 1].compose_is_zero(&self.boundaries[k]) {
        return Err(ChainError::SquareZeroViolation { degree: k });
      }
    }
    Ok(())
  }

  pub fn dims(&self) -> &[usize] { &self.dims }

  pub fn labels(&self) -> Option<&[Vec<String>]> { self.labels.as_deref() }

  /// Highest degree with at least one cell (0 for the empty complex).
  pub fn dimension(&self) -> usize { self.dims.iter().rposition(|&d| d > 0).unwrap_or(0) }

  pub fn top_degree(&self) -> usize { self.dims.len().saturating_sub(1) }

  /// `∂_k`, or `None` when `k` is 0 or beyond the top degree.
  pub fn boundary(&self, k: usize) -> Option<&IntMatrix> {
    if k == 0 { None } else { self.boundaries.get(k - 1) }
  }

  pub fn euler_characteristic(&self) -> i64 {
    self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
  }

  /// `δ_k : C^k → C^{k+1}` over `field`.
  pub fn coboundary(&self, k: usize, field: FieldSpec) -> Matrix {
    match self.boundary(k + 1) {
      Some(b) => b.over(field).transpose(),
      None => Matrix::zeros(field, 0, self.dims.get(k).copied().unwrap_or(0)),
    }
  }

  fn check_degree(&self, k: usize) -> Result<(), ChainError> {
    if self.dims.is_empty() || k > self.top_degree() {
      return Err(ChainError::DegreeOutOfRange { degree: k, top: self.top_degree() });
    }
    Ok(())
  }

  /// `H^k(C; field)` with explicit representative cocycles.
  pub fn cohomology(&self, field: FieldSpec, k: usize) -> Result<CohomologyBasis, ChainError> {
    self.check_degree(k)?;
    let n = self.dims[k];
    let delta = self.coboundary(k, field);
    let cocycles = linalg::kernel_basis(&delta);
    let coboundaries = if k == 0 { Vec::new() } else { linalg::image_basis(&self.coboundary(k - 1, field)) };

    // Coboundaries first, then cocycles; a cocycle survives iff its column is a pivot.
    let mut columns = coboundaries.clone();
    columns.extend(cocycles.iter().cloned());
    let pivots = linalg::reduce_echelon(&Matrix::from_columns(field, n, &columns)).pivots;
    let representatives: Vec<Vec<Scalar>> = pivots
      .iter()
      .filter(|&&c| c >= coboundaries.len())
      .map(|&c| cocycles[c - coboundaries.len()].clone())
      .collect();

    debug_assert_eq!(representatives.len(), cocycles.len() - coboundaries.len());
    Ok(CohomologyBasis::new(k, field, n, delta, coboundaries, representatives))
  }

  /// Dimensions of `H^k` for every degree.
  pub fn betti_profile(&self, field: FieldSpec) -> Vec<usize> {
    (0..self.dims.len()).map(|k| self.cohomology_dimension(field, k)).collect()
  }

  fn cohomology_dimension(&self, field: FieldSpec, k: usize) -> usize {
    let cocycles = self.dims[k] - linalg::rank(&self.coboundary(k, field));
    let coboundaries = if k == 0 { 0 } else { linalg::rank(&self.coboundary(k - 1, field)) };
    cocycles - coboundaries
  }

  /// `dim H_k(C; field)` computed from chains, the dual route to [`Self::betti_profile`].
  pub fn homology_dims(&self, field: FieldSpec) -> Vec<usize> {
    (0..self.dims.len())
      .map(|k| {
        let rank_out = self.boundary(k).map_or(0, |b| linalg::rank(&b.over(field)));
        let rank_in = self.boundary(k + 1).map_or(0, |b| linalg::rank(&b.over(field)));
        self.dims[k] - rank_out - rank_in
      })
      .collect()
  }
}

/// A basis of `H^k` given by representative cocycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyBasis {
  degree:          usize,
  field:           FieldSpec,
  cochain_dim:     usize,
  coboundary:      Matrix,
  coboundaries:    Vec<Vec<Scalar>>,
  representatives: Vec<Vec<Scalar>>,
  // [coboundaries | representatives] as columns; used for projection.
  span:            Matrix,
}

impl CohomologyBasis {
  fn new(
    degree: usize,
    field: FieldSpec,
    cochain_dim: usize,
    coboundary: Matrix,
    coboundaries: Vec<Vec<Scalar>>,
    representatives: Vec<Vec<Scalar>>,
  ) -> Self {
    let mut columns = coboundaries.clone();
    columns.extend(representatives.iter().cloned());
    let span = Matrix::from_columns(field, cochain_dim, &columns);
    Self { degree, field, cochain_dim, coboundary, coboundaries, representatives, span }
  }

  pub fn degree(&self) -> usize { self.degree }

  pub fn field(&self) -> FieldSpec { self.field }

  pub fn dimension(&self) -> usize { self.representatives.len() }

  pub fn cochain_dimension(&self) -> usize { self.cochain_dim }

  pub fn representatives(&self) -> &[Vec<Scalar>] { &self.representatives }

  pub fn coboundaries(&self) -> &[Vec<Scalar>] { &self.coboundaries }

  pub fn is_cocycle(&self, z: &[Scalar]) -> bool { self.coboundary.mul_vec(z).iter().all(Scalar::is_zero) }

  /// Replaces one representative by another cocycle in the same class.
  pub(crate) fn replace_representative(&mut self, index: usize, z: Vec<Scalar>) {
    self.representatives[index] = z;
    *self = Self::new(
      self.degree,
      self.field,
      self.cochain_dim,
      self.coboundary.clone(),
      core::mem::take(&mut self.coboundaries),
      core::mem::take(&mut self.representatives),
    );
  }

  /// Coordinates of the class `[z]` in the representative basis.
  pub fn project(&self, z: &[Scalar]) -> Result<Vec<Scalar>, ChainError> {
    if z.len() != self.cochain_dim {
      return Err(ChainError::LengthMismatch { expected: self.cochain_dim, got: z.len() });
    }
    if !self.is_cocycle(z) {
      return Err(ChainError::NotACocycle { degree: self.degree });
    }
    let x = linalg::solve(&self.span, z).ok_or(ChainError::NotACocycle { degree: self.degree })?;
    Ok(x[self.coboundaries.len()..].to_vec())
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn circle() -> ChainComplexData {
    ChainComplexData::new(vec![1, 1], vec![IntMatrix::from_rows(&[vec![0]], 1)]).unwrap()
  }

  fn genus_two_presentation() -> ChainComplexData {
    ChainComplexData::new(vec![1, 4, 1], vec![
      IntMatrix::zeros(1, 4),
      IntMatrix::from_rows(&[vec![0], vec![0], vec![0], vec![0]], 1),
    ])
    .unwrap()
  }

  #[test]
  fn circle_cohomology() {
    let q = FieldSpec::rationals();
    assert_eq!(circle().cohomology(q, 1).unwrap().dimension(), 1);
    assert_eq!(circle().betti_profile(q), vec![1, 1]);
  }

  #[test]
  fn genus_two_profile() {
    let q = FieldSpec::rationals();
    assert_eq!(genus_two_presentation().betti_profile(q), vec![1, 4, 1]);
  }

  #[test]
  fn one_relator_divisible_exponents() {
    // <a,b | a^5 b^5>: d2 column is (5,5)
    let cc = ChainComplexData::new(vec![1, 2, 1], vec![
      IntMatrix::zeros(1, 2),
      IntMatrix::from_rows(&[vec![5], vec![5]], 1),
    ])
    .unwrap();
    let f5 = FieldSpec::new(5).unwrap();
    assert_eq!(cc.cohomology(f5, 2).unwrap().dimension(), 1);
    assert_eq!(cc.cohomology(FieldSpec::rationals(), 2).unwrap().dimension(), 0);
    assert_eq!(cc.betti_profile(f5), vec![1, 2, 1]);
    assert_eq!(cc.betti_profile(FieldSpec::rationals()), vec![1, 1, 0]);
  }

  #[test]
  fn square_zero_violation() {
    // d1 = [1, -1] would be fine; make d1∘d2 nonzero instead.
    let err = ChainComplexData::new(vec![2, 1, 1], vec![
      IntMatrix::from_rows(&[vec![-1], vec![1]], 1),
      IntMatrix::from_rows(&[vec![1]], 1),
    ])
    .unwrap_err();
    assert_eq!(err, ChainError::SquareZeroViolation { degree: 1 });
  }

  #[test]
  fn shape_mismatch() {
    let err = ChainComplexData::new(vec![1, 2], vec![IntMatrix::zeros(1, 3)]).unwrap_err();
    assert!(matches!(err, ChainError::ShapeMismatch { degree: 1, .. }));
  }

  #[test]
  fn degree_out_of_range() {
    assert!(matches!(
      circle().cohomology(FieldSpec::rationals(), 2),
      Err(ChainError::DegreeOutOfRange { degree: 2, top: 1 })
    ));
  }

  #[test]
  fn projection_of_representative_is_unit_vector() {
    let cc = genus_two_presentation();
    let q = FieldSpec::rationals();
    let h1 = cc.cohomology(q, 1).unwrap();
    for (i, r) in h1.representatives().iter().enumerate() {
      let coords = h1.project(r).unwrap();
      for (j, c) in coords.iter().enumerate() {
        assert_eq!(c.is_one(), i == j);
        assert_eq!(c.is_zero(), i != j);
      }
    }
  }
}
