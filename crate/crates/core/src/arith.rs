//! Elementary integer and rational number theory: Kronecker symbols,
//! trial-division factorization, p-adic valuations and the Möbius function.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default bound on `|n|` for [`factorize`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000_000_000;

/// A value in `{-1, 0, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Sign {
        match v.signum() {
            -1 => Sign::Minus,
            0 => Sign::Zero,
            _ => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    pub fn pow(self, e: u64) -> Sign {
        match self {
            Sign::Minus if e % 2 == 1 => Sign::Minus,
            Sign::Zero if e > 0 => Sign::Zero,
            _ => Sign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i64(self.value() * rhs.value())
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        Sign::from_i64(-self.value())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: u64) -> Sign {
    debug_assert!(n % 2 == 1);
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut t = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        Sign::from_i64(t)
    } else {
        Sign::Zero
    }
}

/// The Kronecker symbol `(a/n)` for arbitrary integers.
///
/// Conventions: `(a/0)` is 1 for `a = ±1` and 0 otherwise; `(a/-1)` is
/// `sgn(a)`, so `(0/-1) = 0` and the symbol stays multiplicative in `a`; `(a/2)` is 0 for even `a`, +1 for `a ≡ ±1 (mod 8)`
/// and -1 for `a ≡ ±3 (mod 8)`. Odd parts go through the Jacobi symbol.
pub fn kronecker(a: i64, n: i64) -> Sign {
    if n == 0 {
        return if a == 1 || a == -1 { Sign::Plus } else { Sign::Zero };
    }
    let mut result = if n < 0 { Sign::from_i64(a) } else { Sign::Plus };
    if result == Sign::Zero {
        return Sign::Zero;
    }
    let mut n = n.unsigned_abs();
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return Sign::Zero;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    result * jacobi(a, n)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> Sign {
    jacobi(a, p)
}

/// The fourth root of unity `ε_c` of the quadratic Gauss sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsUnit {
    One,
    I,
}

impl EpsUnit {
    pub fn to_complex(self) -> num_complex::Complex64 {
        match self {
            EpsUnit::One => num_complex::Complex64::new(1.0, 0.0),
            EpsUnit::I => num_complex::Complex64::new(0.0, 1.0),
        }
    }
}

/// `ε_c = 1` for `c ≡ 1 (mod 4)`, `i` for `c ≡ 3 (mod 4)`.
pub fn eps(c: i64) -> Result<EpsUnit> {
    if c <= 0 || c % 2 == 0 {
        return Err(Error::InvalidArgument(format!("eps needs an odd positive integer, got {c}")));
    }
    Ok(if c % 4 == 1 { EpsUnit::One } else { EpsUnit::I })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization `Π p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn value(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Number of positive divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factorization of `|n|` by trial division, bounded by [`DEFAULT_FACTOR_BOUND`].
pub fn factorize(n: i64) -> Result<Factorization> {
    factorize_bounded(n, DEFAULT_FACTOR_BOUND)
}

pub fn factorize_bounded(n: i64, bound: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero("factorization input"));
    }
    let mut m = n.unsigned_abs();
    if m > bound {
        return Err(Error::FactorizationTooLarge { value: m.to_string(), bound });
    }
    let mut factors = Vec::new();
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut d = 3u64;
    while d * d <= m {
        push(d, &mut m);
        d += 2;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { factors })
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn int_valuation(n: i64, p: u64) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

fn big_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Exponent of `p` in the nonzero rational `x` (negative allowed).
pub fn valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::Zero("valuation argument"));
    }
    let p = BigInt::from(p);
    Ok(big_valuation(x.numer(), &p) - big_valuation(x.denom(), &p))
}

/// Legendre symbol of the class of the `p`-unit `x` in `(Z/pZ)^×`.
pub fn rational_legendre(x: &BigRational, p: u64) -> Result<Sign> {
    if valuation(x, p)? != 0 {
        return Err(Error::NotPUnit { value: x.to_string(), p });
    }
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_i64().expect("residue fits");
    let den = x.denom().mod_floor(&pb).to_i64().expect("residue fits");
    // (num/den / p) = (num/p)(den/p) since den^{-1} and den have the same symbol
    Ok(legendre(num, p) * legendre(den, p))
}

/// Möbius function.
pub fn moebius(n: u64) -> Result<Sign> {
    if n == 0 {
        return Err(Error::Zero("moebius argument"));
    }
    let n = i64::try_from(n).map_err(|_| Error::FactorizationTooLarge {
        value: n.to_string(),
        bound: DEFAULT_FACTOR_BOUND,
    })?;
    let f = factorize(n)?;
    if !f.is_squarefree() {
        return Ok(Sign::Zero);
    }
    Ok(if f.omega() % 2 == 0 { Sign::Plus } else { Sign::Minus })
}

pub fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or(Error::Overflow("prime power"))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}
