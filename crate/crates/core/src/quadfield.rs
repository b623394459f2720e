//! The real quadratic field `K = Q(√D)` of odd fundamental discriminant `D`.
//!
//! Integral elements are carried in half coordinates `(u + v√D)/2` with
//! `u ≡ v (mod 2)`; arbitrary field elements use rational coordinates
//! `x + y√D`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Factorization, Sign};
use crate::error::{Error, Result};

/// A validated odd fundamental discriminant `D > 1` of a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Discriminant {
    value: u64,
    ramified: Factorization,
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 1 {
            return Err(Error::InvalidDiscriminant(d, "must exceed 1"));
        }
        if d % 2 == 0 {
            return Err(Error::InvalidDiscriminant(d, "must be odd"));
        }
        if d % 4 != 1 {
            return Err(Error::InvalidDiscriminant(d, "must be 1 mod 4"));
        }
        let ramified = arith::factorize(d)?;
        if !ramified.is_squarefree() {
            return Err(Error::InvalidDiscriminant(d, "must be squarefree"));
        }
        Ok(Discriminant { value: d as u64, ramified })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn as_i64(&self) -> i64 {
        self.value as i64
    }

    pub fn big(&self) -> BigInt {
        BigInt::from(self.value)
    }

    pub fn ramified_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.ramified.primes()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.ramified
    }

    pub fn divides(&self, p: u64) -> bool {
        self.value % p == 0
    }

    /// `χ_D(n) = (D/n)`.
    pub fn chi(&self, n: i64) -> Sign {
        arith::kronecker(self.as_i64(), n)
    }

    /// `1 = (2 + 0√D)/2`.
    pub fn one(&self) -> QuadElem {
        QuadElem::from_i64(2, 0).expect("valid")
    }

    /// `ω = (1 + √D)/2`.
    pub fn omega(&self) -> QuadElem {
        QuadElem::from_i64(1, 1).expect("valid")
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The integral element `(u + v√D)/2` with `u ≡ v (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    u: BigInt,
    v: BigInt,
}

impl QuadElem {
    pub fn new(u: BigInt, v: BigInt) -> Result<Self> {
        if (&u - &v).is_odd() {
            return Err(Error::InvalidArgument(format!(
                "({u} + {v}√D)/2 is not integral: u and v must have equal parity"
            )));
        }
        Ok(QuadElem { u, v })
    }

    pub fn from_i64(u: i64, v: i64) -> Result<Self> {
        Self::new(BigInt::from(u), BigInt::from(v))
    }

    /// `a + bω` in basis coordinates.
    pub fn from_basis(a: &BigInt, b: &BigInt) -> Self {
        QuadElem { u: 2 * a + b, v: b.clone() }
    }

    /// Coordinates `(a, b)` with `x = a + bω`.
    pub fn to_basis(&self) -> (BigInt, BigInt) {
        ((&self.u - &self.v) / 2, self.v.clone())
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn conjugate(&self) -> QuadElem {
        QuadElem { u: self.u.clone(), v: -&self.v }
    }

    /// `N(x) = (u² - Dv²)/4`, an integer by the parity invariant.
    pub fn norm(&self, d: &Discriminant) -> BigInt {
        let four_n = &self.u * &self.u - d.big() * &self.v * &self.v;
        debug_assert!((&four_n % 4u32).is_zero());
        four_n / 4
    }

    /// `tr(x) = u`.
    pub fn trace(&self) -> BigInt {
        self.u.clone()
    }

    pub fn mul(&self, other: &QuadElem, d: &Discriminant) -> QuadElem {
        let u = (&self.u * &other.u + d.big() * &self.v * &other.v) / 2;
        let v = (&self.u * &other.v + &other.u * &self.v) / 2;
        QuadElem { u, v }
    }

    pub fn add(&self, other: &QuadElem) -> QuadElem {
        QuadElem { u: &self.u + &other.u, v: &self.v + &other.v }
    }

    pub fn to_field(&self) -> FieldElem {
        let two = BigInt::from(2);
        FieldElem {
            x: BigRational::new(self.u.clone(), two.clone()),
            y: BigRational::new(self.v.clone(), two),
        }
    }
}

/// Textual form `u+v*sqrtD/2`, meaning `(u + v√D)/2`.
impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_negative() {
            write!(f, "{}-{}*sqrtD/2", self.u, -&self.v)
        } else {
            write!(f, "{}+{}*sqrtD/2", self.u, self.v)
        }
    }
}

impl FromStr for QuadElem {
    type Err = Error;

    /// Accepts `u+v*sqrtD/2`, `u-v*sqrtD/2`, or a JSON pair `[u, v]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("element {s:?}: expected u+v*sqrtD/2 or [u, v]"));
        let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (u, v) = inner.split_once(',').ok_or_else(bad)?;
            return QuadElem::new(parse(u)?, parse(v)?);
        }
        let body = s.strip_suffix("*sqrtD/2").ok_or_else(bad)?;
        // the separating sign is the last '+' or '-' that is not a leading sign
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .last()
            .map(|(i, _)| i)
            .ok_or_else(bad)?;
        let u = parse(&body[..split])?;
        let v = parse(&body[split + 1..])?;
        let v = if body.as_bytes()[split] == b'-' { -v } else { v };
        QuadElem::new(u, v)
    }
}

/// An arbitrary element `x + y√D` of `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub x: BigRational,
    pub y: BigRational,
}

impl FieldElem {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        FieldElem { x, y }
    }

    pub fn rational(x: BigRational) -> Self {
        FieldElem { x, y: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        FieldElem { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElem {
        FieldElem { x: &self.x * q, y: &self.y * q }
    }

    pub fn mul(&self, o: &FieldElem, d: &Discriminant) -> FieldElem {
        let dd = BigRational::from_integer(d.big());
        FieldElem {
            x: &self.x * &o.x + dd * &self.y * &o.y,
            y: &self.x * &o.y + &o.x * &self.y,
        }
    }

    pub fn conjugate(&self) -> FieldElem {
        FieldElem { x: self.x.clone(), y: -&self.y }
    }

    pub fn norm(&self, d: &Discriminant) -> BigRational {
        &self.x * &self.x - BigRational::from_integer(d.big()) * &self.y * &self.y
    }

    pub fn trace(&self) -> BigRational {
        &self.x * BigRational::from_integer(BigInt::from(2))
    }

    /// Coordinates `(a, b)` with `self = a + bω`.
    pub fn basis_coords(&self) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(BigInt::from(2));
        (&self.x - &self.y, &self.y * two)
    }

    /// The element as `(u + v√D)/2` if it lies in `O_K`.
    pub fn to_integral(&self) -> Option<QuadElem> {
        let (a, b) = self.basis_coords();
        if a.is_integer() && b.is_integer() {
            Some(QuadElem::from_basis(&a.to_integer(), &b.to_integer()))
        } else {
            None
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrtD", self.x, self.y)
    }
}
