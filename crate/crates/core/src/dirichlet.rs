//! The Dirichlet series `Σ_b G^b(𝔞, m, 0) b^{-s}`: Euler factors, truncated
//! `ζ` and `L(s, χ_D)`, both sides of the series identity and the residue
//! at `s = 2`.

use rayon::prelude::*;

use crate::arith::{self, Sign};
use crate::divisor::{self, SigmaQuery};
use crate::error::{Error, Result};
use crate::ideals::{FracIdeal, GenusFingerprint};
use crate::quadfield::Discriminant;
use crate::repnum;

/// A partial sum with a claimed bound on `|true - value|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub truncation: u64,
    pub tail_bound: f64,
}

const BLOCK: u64 = 1024;

fn check_s(s: f64, min: f64, what: &str) -> Result<()> {
    if !(s > min) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("{what} needs s > {min}, got {s}")));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// `Σ_r N_{p^r}(𝔞, m) p^{-rs}` for `p ∤ D`, with `q = p^{1-s}`.
pub fn euler_factor_unramified(d: &Discriminant, p: u64, m: i64, s: f64) -> Result<f64> {
    check_s(s, 1.0, "Euler factor")?;
    check_prime(p)?;
    if d.divides(p) {
        return Err(Error::InvalidArgument(format!("{p} divides D = {d}")));
    }
    let chi = d.chi(p as i64).as_f64();
    let pf = p as f64;
    let q = pf.powf(1.0 - s);
    let first = (pf - chi * q) / (pf * (1.0 - q));
    let second = if m == 0 {
        1.0 / (1.0 - chi * q)
    } else {
        let nu = arith::int_valuation(m, p) as i32;
        (1.0 - (chi * q).powi(nu + 1)) / (1.0 - chi * q)
    };
    Ok(first * second)
}

/// `p^{-1} Σ_r N_{p^{r+1}}(𝔞, m) p^{-rs}` for `p | D`.
pub fn euler_factor_ramified(d: &Discriminant, p: u64, m: i64, na_sign: Sign, s: f64) -> Result<f64> {
    check_s(s, 1.0, "Euler factor")?;
    if !d.divides(p) {
        return Err(Error::InvalidArgument(format!("{p} does not divide D = {d}")));
    }
    let q = (p as f64).powf(1.0 - s);
    if m == 0 {
        return Ok(1.0 / (1.0 - q));
    }
    if na_sign == Sign::Zero {
        return Err(Error::NeedGenusRepresentative(p));
    }
    let nu = arith::int_valuation(m, p);
    let m0 = m / (p as i64).pow(nu);
    let d0 = (d.value() / p) as i64;
    let sigma = arith::legendre(-d0, p).pow(nu as u64) * na_sign * arith::legendre(m0, p);
    Ok((1.0 + sigma.as_f64() * q.powi(nu as i32)) / (1.0 - q))
}

/// The same local factor summed directly from the closed counts up to
/// `p^R` with `p^{R(s-2)} > 10^{10}`, plus a bound on the rest.
pub fn euler_factor_direct(fp: &GenusFingerprint, d: &Discriminant, p: u64, m: i64, s: f64) -> Result<SeriesEval> {
    check_s(s, 2.0, "direct Euler factor")?;
    check_prime(p)?;
    let pf = p as f64;
    let r_max = ((10.0 / ((s - 2.0) * pf.log10())).ceil() as u32).max(1);
    let ramified = d.divides(p);
    let na = if ramified { Some(fp.sign(p)) } else { None };
    let mut value = 0.0;
    let mut r = 0u32;
    loop {
        let beta = if ramified { r + 1 } else { r };
        let n = match arith::checked_pow(p, beta) {
            Ok(_) => repnum::rep_count_prime_power(d, p, beta, m, na)? as f64,
            Err(_) => break,
        };
        let term = n * pf.powf(-(r as f64) * s);
        value += if ramified { term / pf } else { term };
        if r >= r_max {
            break;
        }
        r += 1;
    }
    // every term is at most (r + 1) q^r with q = p^{1-s}
    let q = pf.powf(1.0 - s);
    let tail_bound = (r as f64 + 2.0) * q.powi(r as i32 + 1) / (1.0 - q).powi(2);
    Ok(SeriesEval { value, truncation: r as u64, tail_bound })
}

/// `Σ_{n ≤ B} n^{-s}`.
pub fn zeta_truncated(s: f64, b: u64) -> Result<SeriesEval> {
    check_s(s, 1.0, "ζ")?;
    if b == 0 {
        return Err(Error::InvalidArgument("truncation B must be positive".into()));
    }
    let value = block_sum(b, |n| (n as f64).powf(-s));
    Ok(SeriesEval { value, truncation: b, tail_bound: (b as f64).powf(1.0 - s) / (s - 1.0) })
}

/// `ζ(s)` from the partial sum to `B` plus Euler–Maclaurin corrections
/// through `B^{-s-3}`.
pub fn zeta_corrected(s: f64, b: u64) -> Result<SeriesEval> {
    let raw = zeta_truncated(s, b)?;
    let bf = b as f64;
    let correction = bf.powf(1.0 - s) / (s - 1.0) - 0.5 * bf.powf(-s) + s / 12.0 * bf.powf(-s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * bf.powf(-s - 3.0);
    let next = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * bf.powf(-s - 5.0);
    Ok(SeriesEval { value: raw.value + correction, truncation: b, tail_bound: next })
}

/// `Σ_{n ≤ B} χ_D(n) n^{-s}` with the Abel bound `D·B^{-s}`.
pub fn l_truncated(d: &Discriminant, s: f64, b: u64) -> Result<SeriesEval> {
    check_s(s, 0.0, "L(s, χ_D)")?;
    if b == 0 {
        return Err(Error::InvalidArgument("truncation B must be positive".into()));
    }
    let period: Vec<f64> = (0..d.value()).map(|r| d.chi(r as i64).as_f64()).collect();
    let dv = d.value();
    let value = block_sum(b, |n| {
        let c = period[(n % dv) as usize];
        if c == 0.0 {
            0.0
        } else {
            c * (n as f64).powf(-s)
        }
    });
    Ok(SeriesEval { value, truncation: b, tail_bound: dv as f64 * (b as f64).powf(-s) })
}

/// `Π_{p ≤ B} (1 - χ_D(p) p^{-s})^{-1}`.
pub fn l_euler_partial(d: &Discriminant, s: f64, b: u64) -> Result<f64> {
    check_s(s, 1.0, "L(s, χ_D)")?;
    Ok((2..=b)
        .filter(|&p| arith::is_prime(p))
        .map(|p| 1.0 / (1.0 - d.chi(p as i64).as_f64() * (p as f64).powf(-s)))
        .product())
}

/// `Σ_{n=1}^{B} f(n)` in fixed blocks, reduced in block order.
fn block_sum<F: Fn(u64) -> f64 + Sync>(b: u64, f: F) -> f64 {
    let blocks: Vec<f64> = (0..b.div_ceil(BLOCK))
        .into_par_iter()
        .map(|k| {
            let lo = k * BLOCK + 1;
            let hi = ((k + 1) * BLOCK).min(b);
            // small terms first
            (lo..=hi).rev().map(&f).sum::<f64>()
        })
        .collect();
    blocks.iter().rev().sum()
}

/// `Σ_{b ≤ B} G^b(𝔞, m, 0) b^{-s}` from the closed counts.
///
/// Since `G^b ≤ 2^{ω(D)} τ(b) b` and `Σ_{n ≤ x} τ(n) ≤ x(ln x + 1)`, partial
/// summation bounds the tail by
/// `2^{ω(D)} (s-1) B^{2-s} ((ln B + 1)/(s-2) + 1/(s-2)²)`.
pub fn series_lhs(fp: &GenusFingerprint, d: &Discriminant, m: i64, s: f64, b: u64) -> Result<SeriesEval> {
    check_s(s, 2.0, "series")?;
    if b == 0 {
        return Err(Error::InvalidArgument("truncation B must be positive".into()));
    }
    let blocks: Vec<f64> = (0..b.div_ceil(BLOCK))
        .into_par_iter()
        .map(|k| {
            let lo = k * BLOCK + 1;
            let hi = ((k + 1) * BLOCK).min(b);
            let mut acc = 0.0;
            for n in (lo..=hi).rev() {
                let g = repnum::g_rep_for_genus(fp, d, m, n)?;
                if g > 0 {
                    acc += g as f64 * (n as f64).powf(-s);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let value = blocks.iter().rev().sum();
    Ok(SeriesEval { value, truncation: b, tail_bound: lhs_tail_bound(d, s, b) })
}

fn lhs_tail_bound(d: &Discriminant, s: f64, b: u64) -> f64 {
    let c = (1u64 << d.factorization().omega()) as f64;
    let bf = b as f64;
    let e = s - 2.0;
    c * (s - 1.0) * bf.powf(-e) * ((bf.ln() + 1.0) / e + 1.0 / (e * e))
}

/// [`series_lhs`] with brute-force counts; meant for small `B`.
pub fn series_lhs_oracle(ideal: &FracIdeal, d: &Discriminant, m: i64, s: f64, b: u64) -> Result<SeriesEval> {
    check_s(s, 2.0, "series")?;
    let terms: Vec<f64> = (1..=b)
        .into_par_iter()
        .map(|n| {
            let bd = n.checked_mul(d.value()).ok_or(Error::Overflow("b·D"))?;
            let count = ideal.residue_norm_profile_bounded(bd, d, u64::MAX)?.count(m);
            if count % d.value() != 0 {
                return Err(Error::Inconsistency(format!("N_{bd} = {count} not divisible by D")));
            }
            Ok((count / d.value()) as f64 * (n as f64).powf(-s))
        })
        .collect::<Result<_>>()?;
    Ok(SeriesEval { value: terms.iter().rev().sum(), truncation: b, tail_bound: lhs_tail_bound(d, s, b) })
}

/// `|m|^{-s/2} ζ(s-1) σ(𝔞, m, 1-s) / L(s, χ_D)`, or
/// `ζ(s-1) L(s-1, χ_D) / L(s, χ_D)` for `m = 0`.
///
/// `tail_bound` is a first-order propagation of the truncation errors.
pub fn series_rhs(fp: &GenusFingerprint, d: &Discriminant, m: i64, s: f64, b: u64) -> Result<SeriesEval> {
    check_s(s, 2.0, "series")?;
    let zeta = zeta_corrected(s - 1.0, b)?;
    let l = l_truncated(d, s, b)?;
    if l.value <= l.tail_bound {
        return Err(Error::InvalidArgument(format!("L({s}, χ_D) not resolved at B = {b}")));
    }
    let (factor, factor_rel) = if m == 0 {
        let l1 = l_truncated(d, s - 1.0, b)?;
        (l1.value, l1.tail_bound / l1.value.abs())
    } else {
        let sigma = divisor::sigma_def(&SigmaQuery::new(d.clone(), fp.clone(), m, 1.0 - s)?)?;
        ((m.unsigned_abs() as f64).powf(-s / 2.0) * sigma, 0.0)
    };
    let value = zeta.value * factor / l.value;
    let rel = zeta.tail_bound / zeta.value + l.tail_bound / (l.value - l.tail_bound) + factor_rel;
    Ok(SeriesEval { value, truncation: b, tail_bound: value.abs() * rel })
}

/// `lim_{s→2} (s-2) Σ_b G^b b^{-s}`: `|m|^{-1} σ(𝔞, m, -1) / L(2, χ_D)`, or
/// `L(1, χ_D)/L(2, χ_D)` for `m = 0`.
pub fn residue_at_2(fp: &GenusFingerprint, d: &Discriminant, m: i64, b: u64) -> Result<f64> {
    let l2 = l_truncated(d, 2.0, b)?.value;
    if m == 0 {
        return Ok(l_truncated(d, 1.0, b)?.value / l2);
    }
    let sigma = divisor::sigma_def(&SigmaQuery::new(d.clone(), fp.clone(), m, -1.0)?)?;
    Ok(sigma / m.unsigned_abs() as f64 / l2)
}

/// Richardson extrapolation of `h · series_rhs(2 + h)` from
/// `h ∈ {h0, h0/2, h0/4}` to `h = 0`.
pub fn residue_extrapolated(fp: &GenusFingerprint, d: &Discriminant, m: i64, h0: f64, b: u64) -> Result<f64> {
    let f = |h: f64| -> Result<f64> { Ok(h * series_rhs(fp, d, m, 2.0 + h, b)?.value) };
    let (f0, f1, f2) = (f(h0)?, f(h0 / 2.0)?, f(h0 / 4.0)?);
    let r0 = 2.0 * f1 - f0;
    let r1 = 2.0 * f2 - f1;
    Ok((4.0 * r1 - r0) / 3.0)
}

/// One local factor of the identity at `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorCheck {
    pub p: u64,
    /// Direct sum of the local counts.
    pub lhs: f64,
    /// Factor of `ζ(s-1)/L(s,χ_D)` times the local factor of `σ`.
    pub rhs: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub lhs: SeriesEval,
    pub rhs: SeriesEval,
    pub relative_error: f64,
    pub factors: Vec<FactorCheck>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Local factor of the right side at `p`.
pub fn rhs_local_factor(fp: &GenusFingerprint, d: &Discriminant, p: u64, m: i64, s: f64) -> Result<f64> {
    check_prime(p)?;
    let chi = d.chi(p as i64).as_f64();
    let pf = p as f64;
    let q = pf.powf(1.0 - s);
    let zeta_over_l = (pf - chi * q) / (pf * (1.0 - q));
    if m == 0 {
        return Ok(zeta_over_l / (1.0 - chi * q));
    }
    let nu = arith::int_valuation(m, p);
    let m_p = pf.powi(nu as i32);
    let sigma_local = if d.divides(p) {
        let d0 = (d.value() / p) as i64;
        let sign = arith::legendre(-d0, p).pow(nu as u64) * fp.sign(p) * arith::legendre(m / (p as i64).pow(nu), p);
        1.0 + sign.as_f64() * m_p.powf(1.0 - s)
    } else {
        let x = chi * q;
        (0..=nu).map(|k| x.powi(k as i32)).sum()
    };
    Ok(zeta_over_l * sigma_local)
}

/// Compares both sides globally and prime by prime for `p ≤ 50`.
pub fn verify_theorem(fp: &GenusFingerprint, d: &Discriminant, m: i64, s: f64, b: u64, tol: f64) -> Result<TheoremReport> {
    let lhs = series_lhs(fp, d, m, s, b)?;
    let rhs = series_rhs(fp, d, m, s, b)?;
    let relative_error = (lhs.value - rhs.value).abs() / 1f64.max(rhs.value.abs());
    let mut factors = Vec::new();
    for p in (2..=50).filter(|&p| arith::is_prime(p)) {
        let direct = euler_factor_direct(fp, d, p, m, s)?;
        let rhs_p = rhs_local_factor(fp, d, p, m, s)?;
        let pass = (direct.value - rhs_p).abs() <= direct.tail_bound + 1e-12 * rhs_p.abs().max(1.0);
        factors.push(FactorCheck { p, lhs: direct.value, rhs: rhs_p, tail_bound: direct.tail_bound, pass });
    }
    let pass = relative_error <= tol && factors.iter().all(|f| f.pass);
    Ok(TheoremReport { lhs, rhs, relative_error, factors, tolerance: tol, pass })
}
