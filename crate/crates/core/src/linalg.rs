//! Dense exact matrices and Gauss–Jordan elimination.
//!
//! Pivoting is fully deterministic: columns are scanned left to right and the
//! topmost nonzero entry at or below the current pivot row is chosen. Every
//! consumer (cohomology representatives, projections, certificates) depends on
//! this, so results are reproducible byte for byte.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FieldSpec, Scalar};

/// Row-major dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
  field: FieldSpec,
  rows:  usize,
  cols:  usize,
  data:  Vec<Scalar>,
}

impl Matrix {
  pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
    Self { field, rows, cols, data: vec![field.zero(); rows * cols] }
  }

  pub fn identity(field: FieldSpec, n: usize) -> Self {
    let mut m = Self::zeros(field, n, n);
    for i in 0..n {
      m.set(i, i, field.one());
    }
    m
  }

  /// Builds a matrix from integer rows, reducing into `field`.
  pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m = Self::zeros(field, rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
      assert_eq!(row.len(), cols, "ragged integer matrix");
      for (j, &v) in row.iter().enumerate() {
        m.set(i, j, field.from_i64(v));
      }
    }
    m
  }

  /// Builds a matrix whose columns are the given vectors.
  pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
    let mut m = Self::zeros(field, rows, columns.len());
    for (j, col) in columns.iter().enumerate() {
      assert_eq!(col.len(), rows, "column length mismatch");
      for (i, v) in col.iter().enumerate() {
        m.set(i, j, v.clone());
      }
    }
    m
  }

  pub fn field(&self) -> FieldSpec { self.field }

  pub fn rows(&self) -> usize { self.rows }

  pub fn cols(&self) -> usize { self.cols }

  pub fn get(&self, i: usize, j: usize) -> &Scalar { &self.data[i * self.cols + j] }

  pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
    debug_assert!(self.field.contains(&v));
    self.data[i * self.cols + j] = v;
  }

  pub fn row(&self, i: usize) -> &[Scalar] { &self.data[i * self.cols..(i + 1) * self.cols] }

  pub fn column(&self, j: usize) -> Vec<Scalar> {
    (0..self.rows).map(|i| self.get(i, j).clone()).collect()
  }

  pub fn transpose(&self) -> Matrix {
    let mut t = Matrix::zeros(self.field, self.cols, self.rows);
    for i in 0..self.rows {
      for j in 0..self.cols {
        t.set(j, i, self.get(i, j).clone());
      }
    }
    t
  }

  pub fn is_zero(&self) -> bool { self.data.iter().all(Scalar::is_zero) }

  pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(v.len(), self.cols, "vector length mismatch");
    (0..self.rows)
      .map(|i| {
        let mut acc = self.field.zero();
        for (a, b) in self.row(i).iter().zip(v) {
          if !a.is_zero() && !b.is_zero() {
            acc += &(a * b);
          }
        }
        acc
      })
      .collect()
  }

  pub fn mul(&self, other: &Matrix) -> Matrix {
    assert_eq!(self.cols, other.rows, "matrix shape mismatch");
    let mut out = Matrix::zeros(self.field, self.rows, other.cols);
    for i in 0..self.rows {
      for k in 0..self.cols {
        let a = self.get(i, k);
        if a.is_zero() {
          continue;
        }
        for j in 0..other.cols {
          let b = other.get(k, j);
          if !b.is_zero() {
            let idx = i * out.cols + j;
            out.data[idx] += &(a * b);
          }
        }
      }
    }
    out
  }

  fn swap_rows(&mut self, a: usize, b: usize) {
    if a == b {
      return;
    }
    for j in 0..self.cols {
      self.data.swap(a * self.cols + j, b * self.cols + j);
    }
  }
}

/// Result of [`reduce_echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
  pub rank:   usize,
  pub pivots: Vec<usize>,
  pub rref:   Matrix,
}

/// Reduced row-echelon form with leftmost-column, topmost-row pivoting.
pub fn reduce_echelon(m: &Matrix) -> Echelon {
  let mut a = m.clone();
  let field = a.field;
  let mut pivots = Vec::new();
  let mut row = 0;
  for col in 0..a.cols {
    if row == a.rows {
      break;
    }
    let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
      continue;
    };
    a.swap_rows(row, p);
    let inv = a.get(row, col).inverse().expect("pivot is nonzero");
    for j in col..a.cols {
      let v = a.get(row, j) * &inv;
      a.set(row, j, v);
    }
    for r in 0..a.rows {
      if r == row {
        continue;
      }
      let factor = a.get(r, col).clone();
      if factor.is_zero() {
        continue;
      }
      for j in col..a.cols {
        let delta = &factor * a.get(row, j);
        if !delta.is_zero() {
          let idx = r * a.cols + j;
          a.data[idx] -= &delta;
        }
      }
    }
    pivots.push(col);
    row += 1;
  }
  debug_assert!(a.data.iter().all(|s| field.contains(s)));
  Echelon { rank: pivots.len(), pivots, rref: a }
}

pub fn rank(m: &Matrix) -> usize { reduce_echelon(m).rank }

/// Basis of the null space `{v : m·v = 0}`, one vector per free column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
  let field = m.field;
  let Echelon { pivots, rref, .. } = reduce_echelon(m);
  let mut is_pivot = vec![false; m.cols];
  for &p in &pivots {
    is_pivot[p] = true;
  }
  let mut basis = Vec::new();
  for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
    let mut v = vec![field.zero(); m.cols];
    v[free] = field.one();
    for (r, &p) in pivots.iter().enumerate() {
      v[p] = -rref.get(r, free).clone();
    }
    assert!(m.mul_vec(&v).iter().all(Scalar::is_zero), "kernel vector failed re-check");
    basis.push(v);
  }
  basis
}

/// Basis of the column space: the original columns at pivot positions.
pub fn image_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
  reduce_echelon(m).pivots.into_iter().map(|c| m.column(c)).collect()
}

/// Some solution of `m·x = b`, or `None` when the system is inconsistent.
#[allow(clippy::needless_range_loop)]
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
  assert_eq!(b.len(), m.rows, "right-hand side length mismatch");
  let field = m.field;
  let mut aug = Matrix::zeros(field, m.rows, m.cols + 1);
  for i in 0..m.rows {
    for j in 0..m.cols {
      aug.set(i, j, m.get(i, j).clone());
    }
    aug.set(i, m.cols, b[i].clone());
  }
  let ech = reduce_echelon(&aug);
  if ech.pivots.last() == Some(&m.cols) {
    return None;
  }
  let mut x = vec![field.zero(); m.cols];
  for (r, &p) in ech.pivots.iter().enumerate() {
    x[p] = ech.rref.get(r, m.cols).clone();
  }
  Some(x)
}
