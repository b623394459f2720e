//! The generalized divisor sum
//! `σ(𝔞, m, s) = |m|^{(1-s)/2} Σ_{d | m} d^s Π_{p | D} (χ_{D(p)}(d) + χ_{D(p)}(N(𝔞) m/d))`
//! in three equivalent forms.
//!
//! `χ_{D(p)}(N(𝔞))` always comes from a [`GenusFingerprint`].

use crate::arith::{self, Sign};
use crate::error::{Error, Result};
use crate::ideals::GenusFingerprint;
use crate::quadfield::Discriminant;

/// `D = D1·D2` with both factors discriminants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiscDecomposition {
    pub d1: i64,
    pub d2: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaQuery {
    pub disc: Discriminant,
    pub fingerprint: GenusFingerprint,
    pub m: i64,
    pub s: f64,
}

impl SigmaQuery {
    pub fn new(disc: Discriminant, fingerprint: GenusFingerprint, m: i64, s: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Zero("σ needs m ≠ 0"));
        }
        check_fingerprint(&disc, &fingerprint)?;
        Ok(SigmaQuery { disc, fingerprint, m, s })
    }

    pub fn with_s(&self, s: f64) -> Self {
        SigmaQuery { s, ..self.clone() }
    }
}

fn check_fingerprint(d: &Discriminant, fp: &GenusFingerprint) -> Result<()> {
    if !fp.signs().keys().copied().eq(d.ramified_primes()) {
        return Err(Error::InvalidArgument(format!("fingerprint {fp} does not match D = {d}")));
    }
    Ok(())
}

/// `D(p) ∈ {p, -p}` with `D(p) ≡ 1 (mod 4)`.
pub fn dp_assign(p: u64, d: &Discriminant) -> Result<i64> {
    if !d.divides(p) {
        return Err(Error::InvalidArgument(format!("{p} does not divide D = {d}")));
    }
    let p = p as i64;
    Ok(if p % 4 == 1 { p } else { -p })
}

/// All `2^{ω(D)}` ordered decompositions; bit `i` of the index puts the
/// `i`-th prime into `D1`.
pub fn disc_decompositions(d: &Discriminant) -> Vec<DiscDecomposition> {
    let dps: Vec<i64> = d.ramified_primes().map(|p| dp_assign(p, d).expect("p | D")).collect();
    (0..1u32 << dps.len())
        .map(|mask| {
            let d1: i64 = dps
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .product();
            DiscDecomposition { d1, d2: d.as_i64() / d1 }
        })
        .collect()
}

fn scale_factor(m: i64, s: f64) -> f64 {
    (m.unsigned_abs() as f64).powf((1.0 - s) / 2.0)
}

/// Definition sum over positive divisors `d` of `|m|`.
pub fn sigma_def(q: &SigmaQuery) -> Result<f64> {
    let f = arith::factorize(q.m)?;
    let mut total = 0.0;
    for d in f.divisors() {
        let di = d as i64;
        let cofactor = q.m / di;
        let mut prod = 1i64;
        for (&p, &na) in q.fingerprint.signs() {
            // χ_{D(p)}(n) = (n/p) for every integer n
            let term = arith::legendre(di, p).value() + (na * arith::legendre(cofactor, p)).value();
            prod *= term;
            if prod == 0 {
                break;
            }
        }
        if prod != 0 {
            total += prod as f64 * (d as f64).powf(q.s);
        }
    }
    Ok(scale_factor(q.m, q.s) * total)
}

/// `(1 - x^{ν+1})/(1 - x)`, by its limit `ν + 1` at `x = 1`.
fn geometric(x: f64, nu: u32) -> f64 {
    if (1.0 - x).abs() < 1e-12 {
        (nu + 1) as f64
    } else {
        (1.0 - x.powi(nu as i32 + 1)) / (1.0 - x)
    }
}

/// `Π_{p ∤ D} (1 - (χ_D(p)p^s)^{ν_p(m)+1}) / (1 - χ_D(p)p^s)` over `p | m`.
pub fn unramified_product(d: &Discriminant, m: i64, s: f64) -> Result<f64> {
    let f = arith::factorize(m)?;
    Ok(f.factors()
        .iter()
        .filter(|(p, _)| !d.divides(*p))
        .map(|&(p, nu)| geometric(d.chi(p as i64).as_f64() * (p as f64).powf(s), nu))
        .product())
}

fn m_part(m: i64, primes: impl Iterator<Item = u64>) -> i64 {
    primes.map(|p| (p as i64).pow(arith::int_valuation(m, p))).product()
}

fn primes_of(n: i64, d: &Discriminant) -> impl Iterator<Item = u64> + '_ {
    d.ramified_primes().filter(move |&p| n % p as i64 == 0)
}

/// `Σ_{D1 D2 = D} χ_{D1}(m_{D2}) χ_{D2}(N(𝔞) m₀ m_{D1}) m_{D2}^s`, where `m₀`
/// carries the sign of `m`.
pub fn ramified_decomposition_sum(fp: &GenusFingerprint, d: &Discriminant, m: i64, s: f64) -> f64 {
    disc_decompositions(d)
        .into_iter()
        .map(|dec| {
            let m_d2 = m_part(m, primes_of(dec.d2, d));
            let rest = m / m_d2;
            let sign = arith::kronecker(dec.d1, m_d2) * fp.character_of(dec.d2) * arith::kronecker(dec.d2, rest);
            sign.as_f64() * (m_d2 as f64).powf(s)
        })
        .sum()
}

/// `Π_{p | D} (1 + (-(D/p)/p)^{ν_p(m)} (N(𝔞) m/m_p / p) m_p^s)`.
pub fn ramified_factor_product(fp: &GenusFingerprint, d: &Discriminant, m: i64, s: f64) -> f64 {
    d.ramified_primes()
        .map(|p| {
            let nu = arith::int_valuation(m, p);
            let m_p = (p as i64).pow(nu);
            let d0 = (d.value() / p) as i64;
            let sign = arith::legendre(-d0, p).pow(nu as u64) * fp.sign(p) * arith::legendre(m / m_p, p);
            1.0 + sign.as_f64() * (m_p as f64).powf(s)
        })
        .product()
}

/// Sum over discriminant decompositions times the unramified product.
pub fn sigma_decomp(q: &SigmaQuery) -> Result<f64> {
    let ram = ramified_decomposition_sum(&q.fingerprint, &q.disc, q.m, q.s);
    Ok(scale_factor(q.m, q.s) * ram * unramified_product(&q.disc, q.m, q.s)?)
}

/// Full Euler product.
pub fn sigma_euler(q: &SigmaQuery) -> Result<f64> {
    let ram = ramified_factor_product(&q.fingerprint, &q.disc, q.m, q.s);
    Ok(scale_factor(q.m, q.s) * ram * unramified_product(&q.disc, q.m, q.s)?)
}

/// Both sides of
/// `Π_{p | D2} (-(D/p)/p)^{ν_p(m)} (N(𝔞) m/m_p / p) = χ_{D1}(m_{D2}) χ_{D2}(N(𝔞) m/m_{D2})`.
pub fn ramified_sign_product(d: &Discriminant, d2: i64, m: i64, fp: &GenusFingerprint) -> Result<(Sign, Sign)> {
    if m == 0 {
        return Err(Error::Zero("m"));
    }
    if d2 == 0 || d.as_i64() % d2 != 0 || !disc_decompositions(d).iter().any(|dec| dec.d2 == d2) {
        return Err(Error::InvalidArgument(format!("{d2} is not a discriminant factor of {d}")));
    }
    let d1 = d.as_i64() / d2;
    let left = primes_of(d2, d).fold(Sign::Plus, |acc, p| {
        let nu = arith::int_valuation(m, p);
        let m_p = (p as i64).pow(nu);
        let d0 = (d.value() / p) as i64;
        acc * arith::legendre(-d0, p).pow(nu as u64) * fp.sign(p) * arith::legendre(m / m_p, p)
    });
    let m_d2 = m_part(m, primes_of(d2, d));
    let right = arith::kronecker(d1, m_d2) * fp.character_of(d2) * arith::kronecker(d2, m / m_d2);
    Ok((left, right))
}

/// True iff `χ_{D(p)}(N(𝔞) m) = -1` for some `p | D`; primes dividing `m`
/// give 0 and never trigger.
pub fn sigma_vanishes(fp: &GenusFingerprint, m: i64) -> Result<bool> {
    if m == 0 {
        return Err(Error::Zero("m"));
    }
    Ok(fp.signs().iter().any(|(&p, &na)| na * arith::legendre(m, p) == Sign::Minus))
}
