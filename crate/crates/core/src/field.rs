//! Exact scalars over ℚ and the prime fields 𝔽_p.
//!
//! A [`FieldSpec`] names the field by its characteristic; a [`Scalar`] is a
//! single exact value in it. Rationals are arbitrary precision and always in
//! lowest terms, residues are always reduced into `[0, p)`.

use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::FieldError;

/// Largest characteristic accepted; keeps residue products inside `u64`.
pub const MAX_CHARACTERISTIC: u64 = u32::MAX as u64;

/// A coefficient field: ℚ (characteristic 0) or 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
  characteristic: u64,
}

impl FieldSpec {
  /// Builds a field of the given characteristic, rejecting non-primes.
  pub fn new(characteristic: u64) -> Result<Self, FieldError> {
    if characteristic == 0 {
      return Ok(Self::rationals());
    }
    if characteristic > MAX_CHARACTERISTIC {
      return Err(FieldError::CharacteristicTooLarge(characteristic));
    }
    if !is_prime(characteristic) {
      return Err(FieldError::NotPrime(characteristic));
    }
    Ok(Self { characteristic })
  }

  pub const fn rationals() -> Self { Self { characteristic: 0 } }

  pub const fn characteristic(&self) -> u64 { self.characteristic }

  pub const fn is_rational(&self) -> bool { self.characteristic == 0 }

  pub fn zero(&self) -> Scalar {
    match self.characteristic {
      0 => Scalar::Rational(BigRational::zero()),
      p => Scalar::Residue { value: 0, modulus: p },
    }
  }

  pub fn one(&self) -> Scalar { self.from_i64(1) }

  pub fn from_i64(&self, v: i64) -> Scalar {
    match self.characteristic {
      0 => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
      p => Scalar::Residue { value: v.rem_euclid(p as i64) as u64, modulus: p },
    }
  }

  pub fn from_bigint(&self, v: &BigInt) -> Scalar {
    match self.characteristic {
      0 => Scalar::Rational(BigRational::from_integer(v.clone())),
      p => {
        let r = v.mod_floor(&BigInt::from(p));
        Scalar::Residue { value: r.to_u64().unwrap_or(0), modulus: p }
      },
    }
  }

  /// Maps a rational into the field; fails over 𝔽_p when p divides the denominator.
  pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
    match self.characteristic {
      0 => Ok(Scalar::Rational(q.clone())),
      p => {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        let inv = den.inverse().ok_or(FieldError::DenominatorVanishes { characteristic: p })?;
        Ok(num * inv)
      },
    }
  }

  /// Parses `"-2"`, `"3/7"` or a residue written as a plain integer.
  pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
    let text = text.trim();
    let bad = || FieldError::Parse(text.to_string());
    let q = match text.split_once('/') {
      Some((n, d)) => {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
          return Err(bad());
        }
        BigRational::new(n, d)
      },
      None => BigRational::from_integer(text.parse().map_err(|_| bad())?),
    };
    self.from_rational(&q)
  }

  /// True when `s` lives in this field.
  pub fn contains(&self, s: &Scalar) -> bool {
    match (self.characteristic, s) {
      (0, Scalar::Rational(_)) => true,
      (p, Scalar::Residue { modulus, .. }) => p == *modulus,
      _ => false,
    }
  }
}

impl fmt::Display for FieldSpec {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self.characteristic {
      0 => write!(f, "Q"),
      p => write!(f, "F_{p}"),
    }
  }
}

fn is_prime(n: u64) -> bool {
  if n < 2 {
    return false;
  }
  let mut d = 2u64;
  while d * d <= n {
    if n.is_multiple_of(d) {
      return false;
    }
    d += 1;
  }
  true
}

/// One exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
  Rational(BigRational),
  Residue { value: u64, modulus: u64 },
}

impl Scalar {
  pub fn is_zero(&self) -> bool {
    match self {
      Scalar::Rational(q) => q.is_zero(),
      Scalar::Residue { value, .. } => *value == 0,
    }
  }

  pub fn is_one(&self) -> bool {
    match self {
      Scalar::Rational(q) => q.is_one(),
      Scalar::Residue { value, .. } => *value == 1,
    }
  }

  pub fn field(&self) -> FieldSpec {
    match self {
      Scalar::Rational(_) => FieldSpec::rationals(),
      Scalar::Residue { modulus, .. } => FieldSpec { characteristic: *modulus },
    }
  }

  /// Multiplicative inverse, `None` for zero.
  pub fn inverse(&self) -> Option<Scalar> {
    if self.is_zero() {
      return None;
    }
    match self {
      Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
      Scalar::Residue { value, modulus } => {
        // Fermat: a^(p-2)
        Some(Scalar::Residue { value: pow_mod(*value, *modulus - 2, *modulus), modulus: *modulus })
      },
    }
  }

  /// Integer multiple `n·self`.
  pub fn times(&self, n: i64) -> Scalar { self.clone() * self.field().from_i64(n) }

  pub fn pow(&self, mut e: u32) -> Scalar {
    let mut base = self.clone();
    let mut acc = self.field().one();
    while e > 0 {
      if e & 1 == 1 {
        acc = acc * base.clone();
      }
      base = base.clone() * base;
      e >>= 1;
    }
    acc
  }
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
  let mut acc = 1 % m;
  base %= m;
  while e > 0 {
    if e & 1 == 1 {
      acc = acc * base % m;
    }
    base = base * base % m;
    e >>= 1;
  }
  acc
}

impl fmt::Display for Scalar {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self {
      Scalar::Rational(q) =>
        if q.denom().is_one() {
          write!(f, "{}", q.numer())
        } else {
          write!(f, "{}/{}", q.numer(), q.denom())
        },
      Scalar::Residue { value, .. } => write!(f, "{value}"),
    }
  }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
  panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for Scalar {
  type Output = Scalar;

  fn add(self, rhs: Scalar) -> Scalar {
    match (self, rhs) {
      (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
      (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
        if p == q =>
        Scalar::Residue { value: (a + b) % p, modulus: p },
      (a, b) => mismatch(&a, &b),
    }
  }
}

impl Neg for Scalar {
  type Output = Scalar;

  fn neg(self) -> Scalar {
    match self {
      Scalar::Rational(a) => Scalar::Rational(-a),
      Scalar::Residue { value, modulus } =>
        Scalar::Residue { value: (modulus - value) % modulus, modulus },
    }
  }
}

impl Sub for Scalar {
  type Output = Scalar;

  fn sub(self, rhs: Scalar) -> Scalar { self + (-rhs) }
}

impl Mul for Scalar {
  type Output = Scalar;

  fn mul(self, rhs: Scalar) -> Scalar {
    match (self, rhs) {
      (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
      (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
        if p == q =>
        Scalar::Residue { value: a * b % p, modulus: p },
      (a, b) => mismatch(&a, &b),
    }
  }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
  type Output = Scalar;

  fn mul(self, rhs: &'a Scalar) -> Scalar {
    match (self, rhs) {
      (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
      (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
        if p == q =>
        Scalar::Residue { value: a * b % p, modulus: *p },
      (a, b) => mismatch(a, b),
    }
  }
}

impl AddAssign<&Scalar> for Scalar {
  fn add_assign(&mut self, rhs: &Scalar) {
    match (&mut *self, rhs) {
      (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
      (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
        if *p == *q =>
        *a = (*a + b) % *p,
      (a, b) => mismatch(a, b),
    }
  }
}

impl SubAssign<&Scalar> for Scalar {
  fn sub_assign(&mut self, rhs: &Scalar) { *self += &(-rhs.clone()); }
}

impl MulAssign<&Scalar> for Scalar {
  fn mul_assign(&mut self, rhs: &Scalar) { *self = &*self * rhs; }
}

/// Exact binomial coefficient C(n, k) reduced into `field`.
pub fn binomial_in_field(n: u64, k: u64, field: FieldSpec) -> Result<Scalar, FieldError> {
  if k > n {
    return Err(FieldError::BinomialRange { n, k });
  }
  let k = k.min(n - k);
  let mut acc = BigUint::one();
  for i in 0..k {
    acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
  }
  Ok(field.from_bigint(&BigInt::from(acc)))
}

/// Sign helper `(-1)^e` as a scalar.
pub fn sign(field: FieldSpec, negative: bool) -> Scalar {
  if negative { field.from_i64(-1) } else { field.one() }
}
