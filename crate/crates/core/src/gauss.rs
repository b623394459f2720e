//! Gauss sums `G_b(𝔞, a) = Σ_{λ ∈ 𝔞/b𝔞} e(a N(λ) / (b N(𝔞)))`.
//!
//! Direct sums are kept exact as exponent-count vectors: `counts[t]` is the
//! number of `λ` with `a N(λ)/N(𝔞) ≡ t (mod b)`, so the value is
//! `Σ_t counts[t] e(t/b)`. Floating point only enters in [`eval_complex`].

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith::{self, Sign};
use crate::error::{Error, Result};
use crate::ideals::{self, FracIdeal, ResidueProfile};
use crate::quadfield::Discriminant;

/// Exact carrier of `Σ_t counts[t] e(t/b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    pub b: u64,
    pub counts: Vec<u64>,
}

impl ExponentVector {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Closed-form Gauss sum value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactGaussValue {
    /// `coeff`.
    Rational(BigRational),
    /// `coeff · ε_p · √p`. For classical sums `p` is the (odd) modulus.
    Ramified { coeff: BigRational, p: u64 },
}

impl ExactGaussValue {
    pub fn kind(&self) -> &'static str {
        match self {
            ExactGaussValue::Rational(_) => "rational",
            ExactGaussValue::Ramified { .. } => "ramified",
        }
    }

    pub fn coeff(&self) -> &BigRational {
        match self {
            ExactGaussValue::Rational(c) | ExactGaussValue::Ramified { coeff: c, .. } => c,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let c = self.coeff().to_f64().expect("finite coefficient");
        match self {
            ExactGaussValue::Rational(_) => Complex64::new(c, 0.0),
            ExactGaussValue::Ramified { p, .. } => {
                let unit = arith::eps(*p as i64).expect("odd modulus").to_complex();
                unit * c * (*p as f64).sqrt()
            }
        }
    }
}

/// `e(k/b)` for `k = 0..b`.
pub(crate) fn unit_roots(b: u64) -> Vec<Complex64> {
    (0..b)
        .map(|k| {
            let (s, c) = (TAU * k as f64 / b as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

/// Pushes a norm-residue profile through `r ↦ a·r (mod b)`.
pub fn gauss_from_profile(profile: &ResidueProfile, a: i64) -> ExponentVector {
    let b = profile.b;
    let a = a.rem_euclid(b as i64) as u64;
    let mut counts = vec![0u64; b as usize];
    for (r, &n) in profile.counts.iter().enumerate() {
        counts[((a as u128 * r as u128) % b as u128) as usize] += n;
    }
    ExponentVector { b, counts }
}

/// `G_b(𝔞, a)` by enumeration of `𝔞/b𝔞`.
pub fn gauss_direct(ideal: &FracIdeal, a: i64, b: u64, d: &Discriminant) -> Result<ExponentVector> {
    gauss_direct_bounded(ideal, a, b, d, ideals::DEFAULT_ENUM_BOUND)
}

pub fn gauss_direct_bounded(ideal: &FracIdeal, a: i64, b: u64, d: &Discriminant, bound: u64) -> Result<ExponentVector> {
    let profile = ideal.residue_norm_profile_bounded(b, d, bound)?;
    Ok(gauss_from_profile(&profile, a))
}

/// `Σ_t counts[t] e(t/b)`.
pub fn eval_complex(v: &ExponentVector) -> Complex64 {
    let roots = unit_roots(v.b);
    v.counts
        .iter()
        .zip(&roots)
        .filter(|(&n, _)| n > 0)
        .map(|(&n, &z)| z * n as f64)
        .sum()
}

/// Closed evaluation of `G_{p^β}(𝔞, a)`.
///
/// With `p^α = gcd(a, p^β)` and `a = a₀p^α`:
/// `p^{2β}` if `α = β`; `(χ_D(p) p)^{α+β}` if `p ∤ D`; otherwise
/// `ε_p p^{α+β+1/2} (a₀N(𝔞)/p) (-D₀/p)^{α+β+1}` with `D₀ = D/p`, which
/// needs `𝔞` coprime to `p`.
pub fn gauss_closed(ideal: &FracIdeal, a: i64, p: u64, beta: u32, d: &Discriminant) -> Result<ExactGaussValue> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let b = arith::checked_pow(p, beta)?;
    let alpha = if a.rem_euclid(b as i64) == 0 { beta } else { arith::int_valuation(a, p) };
    let big = |n: u64| BigRational::from_integer(BigInt::from(n));
    if alpha == beta {
        return Ok(ExactGaussValue::Rational(big(b) * big(b)));
    }
    let magnitude = big(arith::checked_pow(p, alpha + beta)?);
    if !d.divides(p) {
        let sign = d.chi(p as i64).pow((alpha + beta) as u64);
        return Ok(ExactGaussValue::Rational(magnitude * BigRational::from_integer(sign.value().into())));
    }
    if !ideals::coprime_to(ideal, p as i64, d)? {
        return Err(Error::NeedGenusRepresentative(p));
    }
    let a0 = a / arith::checked_pow(p, alpha)? as i64;
    let d0 = (d.value() / p) as i64;
    let sign = arith::legendre(a0, p)
        * arith::rational_legendre(&ideal.norm(), p)?
        * arith::legendre(-d0, p).pow((alpha + beta + 1) as u64);
    Ok(ExactGaussValue::Ramified {
        coeff: magnitude * BigRational::from_integer(sign.value().into()),
        p,
    })
}

/// The classical sum `Σ_{x mod c} e(a x²/c)`: closed value `ε_c √c (a/c)`
/// together with the direct count vector.
pub fn classical_gauss(a: i64, c: u64) -> Result<(ExactGaussValue, ExponentVector)> {
    if c == 0 || c % 2 == 0 {
        return Err(Error::InvalidArgument(format!("classical Gauss sum needs odd c > 0, got {c}")));
    }
    if a.gcd(&(c as i64)) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({a}, {c}) must be 1")));
    }
    let symbol = arith::kronecker(a, c as i64);
    let closed = ExactGaussValue::Ramified {
        coeff: BigRational::from_integer(symbol.value().into()),
        p: c,
    };
    let ar = a.rem_euclid(c as i64) as u128;
    let mut counts = vec![0u64; c as usize];
    for x in 0..c as u128 {
        counts[(ar * (x * x % c as u128) % c as u128) as usize] += 1;
    }
    Ok((closed, ExponentVector { b: c, counts }))
}

/// `Σ_{a mod p^r} (a/p) e(ac/p^r)` by direct summation.
pub fn twisted_sum_direct(p: u64, r: u32, c: i64) -> Result<Complex64> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    if c.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidArgument(format!("{c} is divisible by {p}")));
    }
    let modulus = arith::checked_pow(p, r)?;
    let roots = unit_roots(modulus);
    let cr = c.rem_euclid(modulus as i64) as u128;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..modulus {
        let s = arith::legendre(a as i64, p);
        if s == Sign::Zero {
            continue;
        }
        let z = roots[(a as u128 * cr % modulus as u128) as usize];
        acc += z * s.as_f64();
    }
    Ok(acc)
}
