//! Representation numbers `N_b(𝔞, m) = #{λ ∈ 𝔞/b𝔞 : N(λ)/N(𝔞) ≡ m (mod b)}`
//! and `G^b(𝔞, m, 0) = N_{bD}(𝔞, m)/D`.

use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex64;

use crate::arith::{self, Sign};
use crate::error::{Error, Result};
use crate::gauss::{self, ExponentVector};
use crate::ideals::{self, FracIdeal, GenusFingerprint};
use crate::quadfield::Discriminant;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepQuery {
    pub disc: Discriminant,
    pub ideal: FracIdeal,
    pub m: i64,
    pub b: u64,
}

impl RepQuery {
    pub fn new(disc: Discriminant, ideal: FracIdeal, m: i64, b: u64) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidArgument("modulus b must be positive".into()));
        }
        Ok(RepQuery { disc, ideal, m, b })
    }
}

/// Counts by enumerating `𝔞/b𝔞`.
pub fn rep_count_bruteforce(q: &RepQuery) -> Result<u64> {
    rep_count_bruteforce_bounded(q, ideals::DEFAULT_ENUM_BOUND)
}

pub fn rep_count_bruteforce_bounded(q: &RepQuery, bound: u64) -> Result<u64> {
    Ok(q.ideal.residue_norm_profile_bounded(q.b, &q.disc, bound)?.count(q.m))
}

fn to_u64(v: u128) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Overflow("representation number"))
}

/// `N_{p^β}(𝔞, m)` from the case table. `na_sign = (N(𝔞)/p)` for a
/// representative coprime to `p` is needed exactly when `p | D`.
pub fn rep_count_prime_power(
    d: &Discriminant,
    p: u64,
    beta: u32,
    m: i64,
    na_sign: Option<Sign>,
) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let b = arith::checked_pow(p, beta)? as u128;
    if beta == 0 {
        return Ok(1);
    }
    let nu = if m.rem_euclid(b as i64) == 0 { beta } else { arith::int_valuation(m, p) };
    let pp = p as u128;
    let b1 = b / pp;
    let value = match d.chi(p as i64) {
        Sign::Plus if nu < beta => (nu as u128 + 1) * (pp - 1) * b1,
        Sign::Plus => (beta as u128 + 1) * b - beta as u128 * b1,
        Sign::Minus if nu < beta => {
            if nu % 2 == 0 {
                (pp + 1) * b1
            } else {
                0
            }
        }
        Sign::Minus => {
            if beta % 2 == 0 {
                b
            } else {
                b1
            }
        }
        Sign::Zero => {
            let na = na_sign.ok_or(Error::NeedGenusRepresentative(p))?;
            if na == Sign::Zero {
                return Err(Error::NeedGenusRepresentative(p));
            }
            if nu == beta {
                b
            } else {
                let m0 = m / arith::checked_pow(p, nu)? as i64;
                let d0 = (d.value() / p) as i64;
                let sigma = arith::legendre(-d0, p).pow(nu as u64) * arith::legendre(m0, p) * na;
                ((1 + sigma.value()) as u128) * b
            }
        }
    };
    to_u64(value)
}

/// `N_b` for any ideal in the genus with the given fingerprint.
pub fn rep_count_for_genus(fp: &GenusFingerprint, d: &Discriminant, m: i64, b: u64) -> Result<u64> {
    if b == 0 {
        return Err(Error::InvalidArgument("modulus b must be positive".into()));
    }
    let f = arith::factorize(i64::try_from(b).map_err(|_| Error::Overflow("b"))?)?;
    let mut acc: u64 = 1;
    for &(p, beta) in f.factors() {
        let na = if d.divides(p) { Some(fp.sign(p)) } else { None };
        let n = rep_count_prime_power(d, p, beta, m, na)?;
        acc = acc.checked_mul(n).ok_or(Error::Overflow("representation number"))?;
        if acc == 0 {
            break;
        }
    }
    Ok(acc)
}

/// `G^b(𝔞, m, 0) = N_{bD}(𝔞, m)/D` for the genus with fingerprint `fp`.
pub fn g_rep_for_genus(fp: &GenusFingerprint, d: &Discriminant, m: i64, b: u64) -> Result<u64> {
    let bd = b.checked_mul(d.value()).ok_or(Error::Overflow("b·D"))?;
    let n = rep_count_for_genus(fp, d, m, bd)?;
    if n % d.value() != 0 {
        return Err(Error::Inconsistency(format!("N_{bd}(m={m}) = {n} is not divisible by D = {}", d.value())));
    }
    Ok(n / d.value())
}

/// Formula-based counting with a per-ideal fingerprint cache.
#[derive(Debug)]
pub struct RepCounter {
    disc: Discriminant,
    cache: RwLock<HashMap<FracIdeal, GenusFingerprint>>,
}

impl RepCounter {
    pub fn new(disc: Discriminant) -> Self {
        RepCounter { disc, cache: RwLock::new(HashMap::new()) }
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn fingerprint(&self, ideal: &FracIdeal) -> Result<GenusFingerprint> {
        if let Some(fp) = self.cache.read().expect("cache lock").get(ideal) {
            return Ok(fp.clone());
        }
        let fp = ideals::genus_fingerprint(ideal, &self.disc)?;
        self.cache.write().expect("cache lock").insert(ideal.clone(), fp.clone());
        Ok(fp)
    }

    pub fn rep_count(&self, ideal: &FracIdeal, m: i64, b: u64) -> Result<u64> {
        let fp = self.fingerprint(ideal)?;
        rep_count_for_genus(&fp, &self.disc, m, b)
    }

    pub fn g_rep(&self, ideal: &FracIdeal, m: i64, b: u64) -> Result<u64> {
        let fp = self.fingerprint(ideal)?;
        g_rep_for_genus(&fp, &self.disc, m, b)
    }
}

/// `N_b(𝔞, m)` as a product of prime-power counts.
pub fn rep_count(q: &RepQuery) -> Result<u64> {
    RepCounter::new(q.disc.clone()).rep_count(&q.ideal, q.m, q.b)
}

/// `G^b(𝔞, m, 0)`.
pub fn g_rep(ideal: &FracIdeal, m: i64, b: u64, d: &Discriminant) -> Result<u64> {
    RepCounter::new(d.clone()).g_rep(ideal, m, b)
}

/// Inverse DFT of the Gauss sums, `N_{p^β}(𝔞,m) = p^{-β} Σ_a G_{p^β}(𝔞,a) e(-am/p^β)`.
pub fn rep_from_gauss_dft(ideal: &FracIdeal, m: i64, p: u64, beta: u32, d: &Discriminant) -> Result<u64> {
    Ok(rep_from_gauss_dft_many(ideal, &[m], p, beta, d)?[0])
}

/// Same as [`rep_from_gauss_dft`] for several `m`, reusing the Gauss sums.
pub fn rep_from_gauss_dft_many(ideal: &FracIdeal, ms: &[i64], p: u64, beta: u32, d: &Discriminant) -> Result<Vec<u64>> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let b = arith::checked_pow(p, beta)?;
    let profile = ideal.residue_norm_profile(b, d)?;
    let vectors: Vec<ExponentVector> = (0..b as i64).map(|a| gauss::gauss_from_profile(&profile, a)).collect();
    let roots = gauss::unit_roots(b);
    ms.iter().map(|&m| dft_at(&vectors, &roots, m)).collect()
}

fn dft_at(vectors: &[ExponentVector], roots: &[Complex64], m: i64) -> Result<u64> {
    let b = roots.len() as u64;
    let mr = m.rem_euclid(b as i64) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, v) in vectors.iter().enumerate() {
        let shift = (a as u64 * mr) % b;
        for (t, &n) in v.counts.iter().enumerate() {
            if n > 0 {
                acc += roots[((t as u64 + b - shift) % b) as usize] * n as f64;
            }
        }
    }
    acc /= b as f64;
    let rounded = acc.re.round();
    let residual = (acc.re - rounded).abs().max(acc.im.abs());
    const TOL: f64 = 1e-6;
    if residual > TOL || rounded < 0.0 {
        return Err(Error::NumericalResidual { residual, tolerance: TOL });
    }
    Ok(rounded as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::{fixture_ideals, parse_ideal};
    use num_traits::ToPrimitive;

    fn disc(v: i64) -> Discriminant {
        Discriminant::new(v).unwrap()
    }

    /// Independent count: the norm form `ax² + bxy + cy²` of the primitive
    /// part, evaluated with machine integers over `(Z/bZ)²`.
    fn oracle_count(ideal: &FracIdeal, d: &Discriminant, m: i64, b: u64) -> u64 {
        let (fa, fb, fc) = ideal.prim().norm_form(d);
        let (fa, fb, fc) = (fa.to_i128().unwrap(), fb.to_i128().unwrap(), fc.to_i128().unwrap());
        // N(λ)/N(𝔞) = Q(x, y) for λ = s(xα + yβ); the scale cancels.
        let b = b as i128;
        let mut n = 0;
        for x in 0..b {
            for y in 0..b {
                if (fa * x * x + fb * x * y + fc * y * y - m as i128).rem_euclid(b) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    fn q(d: i64, ideal: &str, m: i64, b: u64) -> RepQuery {
        let dd = disc(d);
        let i = parse_ideal(ideal, &dd).unwrap();
        RepQuery::new(dd, i, m, b).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(rep_count_bruteforce(&q(5, "ok", 17, 1)).unwrap(), 1);
        assert_eq!(rep_count_bruteforce(&q(5, "ok", 1, 4)).unwrap(), 6);
        assert_eq!(rep_count_bruteforce(&q(21, "ok", 1, 3)).unwrap(), 6);
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(rep_count_prime_power(&disc(13), 3, 1, 1, None).unwrap(), 2);
        assert_eq!(rep_count_prime_power(&disc(13), 3, 1, 3, None).unwrap(), 5);
        assert_eq!(rep_count_prime_power(&disc(21), 3, 1, 1, Some(Sign::Plus)).unwrap(), 6);
        assert!(matches!(
            rep_count_prime_power(&disc(21), 3, 1, 1, None),
            Err(Error::NeedGenusRepresentative(3))
        ));
    }

    #[test]
    fn rep_count_examples() {
        assert_eq!(rep_count(&q(5, "ok", 1, 20)).unwrap(), 60);
        assert_eq!(rep_count(&q(5, "ok", 1, 1)).unwrap(), 1);
        assert_eq!(rep_count(&q(5, "ok", 2, 5)).unwrap(), 0);
        assert_eq!(rep_count_bruteforce(&q(5, "ok", 1, 20)).unwrap(), 60);
        assert_eq!(rep_count_bruteforce(&q(5, "ok", 2, 5)).unwrap(), 0);
    }

    #[test]
    fn g_rep_examples() {
        let d5 = disc(5);
        let ok = FracIdeal::unit();
        assert_eq!(g_rep(&ok, 1, 1, &d5).unwrap(), 2);
        assert_eq!(g_rep(&ok, 2, 1, &d5).unwrap(), 0);
        assert_eq!(g_rep(&ok, 1, 1, &disc(21)).unwrap(), 4);
        assert_eq!(rep_count_bruteforce(&q(21, "ok", 1, 21)).unwrap(), 84);
    }

    #[test]
    fn dft_examples() {
        let ok = FracIdeal::unit();
        assert_eq!(rep_from_gauss_dft(&ok, 5, 3, 0, &disc(5)).unwrap(), 1);
        assert_eq!(rep_from_gauss_dft(&ok, 1, 2, 2, &disc(5)).unwrap(), 6);
        assert_eq!(rep_from_gauss_dft(&ok, 1, 3, 1, &disc(21)).unwrap(), 6);
    }

    #[test]
    fn bruteforce_matches_oracle() {
        for dv in [5, 13, 21] {
            let d = disc(dv);
            for ideal in fixture_ideals(&d, 5) {
                for b in 1..=18u64 {
                    let profile = ideal.residue_norm_profile(b, &d).unwrap();
                    for m in -3..=(b as i64) {
                        assert_eq!(profile.count(m), oracle_count(&ideal, &d, m, b), "D={dv} {ideal} b={b} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn formula_matches_bruteforce() {
        for dv in [5, 13, 17, 21, 33, 57] {
            let d = disc(dv);
            let counter = RepCounter::new(d.clone());
            for ideal in fixture_ideals(&d, 7) {
                for b in 1..=30u64 {
                    let profile = ideal.residue_norm_profile(b, &d).unwrap();
                    for m in -12..=12 {
                        assert_eq!(
                            counter.rep_count(&ideal, m, b).unwrap(),
                            profile.count(m),
                            "D={dv} {ideal} b={b} m={m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn square_invariance() {
        let d = disc(21);
        for ideal in fixture_ideals(&d, 5) {
            for b in 1..=25u64 {
                let profile = ideal.residue_norm_profile(b, &d).unwrap();
                for c in 1..b as i64 {
                    if num_integer::Integer::gcd(&c, &(b as i64)) != 1 {
                        continue;
                    }
                    for n in 0..b as i64 {
                        assert_eq!(profile.count(n), profile.count(c * c * n));
                    }
                }
            }
        }
    }

    #[test]
    fn g_rep_is_exact_on_grid() {
        for dv in [5, 21, 33] {
            let d = disc(dv);
            let counter = RepCounter::new(d.clone());
            for ideal in fixture_ideals(&d, 5) {
                for b in 1..=60 {
                    for m in -10..=10 {
                        counter.g_rep(&ideal, m, b).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn m_only_matters_mod_b() {
        let d = disc(33);
        let counter = RepCounter::new(d.clone());
        for ideal in fixture_ideals(&d, 5) {
            for b in 1..=40u64 {
                for m in -15..15 {
                    assert_eq!(
                        counter.rep_count(&ideal, m, b).unwrap(),
                        counter.rep_count(&ideal, m + 3 * b as i64, b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn vanishing_sigma_forces_zero_counts() {
        let d = disc(5);
        let ok = FracIdeal::unit();
        for b in 1..=60 {
            assert_eq!(g_rep(&ok, 2, b, &d).unwrap(), 0);
        }
    }

    #[test]
    fn dft_matches_bruteforce_small() {
        for dv in [5, 21] {
            let d = disc(dv);
            for ideal in fixture_ideals(&d, 5) {
                for (p, beta) in [(2, 3), (3, 2), (5, 2), (7, 1)] {
                    let ms: Vec<i64> = (-6..=6).collect();
                    let dft = rep_from_gauss_dft_many(&ideal, &ms, p, beta, &d).unwrap();
                    let profile = ideal.residue_norm_profile(p.pow(beta), &d).unwrap();
                    for (m, n) in ms.iter().zip(dft) {
                        assert_eq!(n, profile.count(*m));
                    }
                }
            }
        }
    }
}
