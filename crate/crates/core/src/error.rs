use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
  #[error("characteristic {0} is not 0 or a prime")]
  NotPrime(u64),
  #[error("characteristic {0} exceeds the supported range")]
  CharacteristicTooLarge(u64),
  #[error("denominator vanishes in characteristic {characteristic}")]
  DenominatorVanishes { characteristic: u64 },
  #[error("cannot parse scalar {0:?}")]
  Parse(String),
  #[error("binomial C({n}, {k}) out of range")]
  BinomialRange { n: u64, k: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
  #[error("boundary composition d{degree}∘d{} is nonzero", degree + 1)]
  SquareZeroViolation { degree: usize },
  #[error("boundary d{degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
  ShapeMismatch { degree: usize, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
  #[error("expected {expected} boundary matrices, got {got}")]
  BoundaryCount { expected: usize, got: usize },
  #[error("degree {degree} out of range 0..={top}")]
  DegreeOutOfRange { degree: usize, top: usize },
  #[error("cochain is not a cocycle in degree {degree}")]
  NotACocycle { degree: usize },
  #[error("vector length {got} does not match cochain dimension {expected}")]
  LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
  #[error("facet {index} is not strictly increasing or is empty")]
  UnorderedFacet { index: usize },
  #[error("facet {index} uses vertex {vertex} but only {count} vertices exist")]
  VertexOutOfRange { index: usize, vertex: usize, count: usize },
  #[error("cochains live over different fields")]
  FieldMismatch,
  #[error("cochain of degree {degree} has {got} entries, expected {expected}")]
  CochainLength { degree: usize, expected: usize, got: usize },
  #[error("complex is not connected (H^0 has dimension {0})")]
  NotConnected(usize),
  #[error(transparent)]
  Chain(#[from] ChainError),
  #[error(transparent)]
  Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
  #[error("elements belong to different algebras")]
  AlgebraMismatch,
  #[error("algebras are over different fields")]
  FieldMismatch,
  #[error("product of basis elements {left} and {right} is not known")]
  UnknownProduct { left: String, right: String },
  #[error("algebra is not a tensor square A⊗A")]
  NotSelfTensor,
  #[error("algebra is not a tensor product")]
  NotTensor,
  #[error("element is not homogeneous")]
  NonHomogeneous,
  #[error("bidegree ({p}, {q}) is outside the algebra")]
  InvalidBidegree { p: usize, q: usize },
  #[error("degree {0} is outside the algebra")]
  InvalidDegree(usize),
  #[error("invalid algebra data: {0}")]
  Invalid(String),
  #[error("invariant violated: {0}")]
  InvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
  #[error("relator {relator:?} uses undeclared letter {letter:?}")]
  UndeclaredLetter { relator: String, letter: char },
  #[error("generator name {0:?} must be a single lowercase letter")]
  BadGenerator(String),
  #[error("duplicate generator {0:?}")]
  DuplicateGenerator(String),
  #[error("presentation needs at least one generator")]
  NoGenerators,
  #[error("unknown bundled space {0:?}")]
  UnknownBundled(String),
  #[error("product of an empty list of spaces")]
  EmptyProduct,
  #[error("algebra is defined over {expected}, requested {requested}")]
  FieldMismatch { expected: String, requested: String },
  #[error("marked class {name:?}: {reason}")]
  MarkedClass { name: String, reason: String },
  #[error(transparent)]
  Field(#[from] FieldError),
  #[error(transparent)]
  Chain(#[from] ChainError),
  #[error(transparent)]
  Simplicial(#[from] SimplicialError),
  #[error(transparent)]
  Ring(#[from] RingError),
}
