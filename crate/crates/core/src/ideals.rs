//! Fractional ideals of `O_K` in standard form.
//!
//! A primitive integral ideal is the lattice `Z·a + Z·(b + √D)/2` with `b`
//! odd, `0 < b ≤ 2a` and `a | (b² - D)/4`. Every fractional ideal is a
//! positive rational multiple of exactly one such lattice, so the pair
//! `(scale, [a, b])` is canonical and equality is structural.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, Sign};
use crate::error::{Error, Result};
use crate::quadfield::{Discriminant, FieldElem};

/// Default bound on the modulus for residue enumeration.
pub const DEFAULT_ENUM_BOUND: u64 = 10_000;
/// Default box radius for the coprime representative search.
pub const DEFAULT_SEARCH_RADIUS: i64 = 200;

/// Moduli at or above this size are enumerated in parallel row blocks.
const PARALLEL_THRESHOLD: u64 = 256;

/// The primitive integral ideal `Z·a + Z·(b + √D)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimIdeal {
    a: BigInt,
    b: BigInt,
}

impl PrimIdeal {
    /// Validates and canonicalizes `b` into `(0, 2a]`.
    pub fn new(a: BigInt, b: BigInt, d: &Discriminant) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidArgument(format!("ideal [{a}, {b}]: a must be positive")));
        }
        if b.is_even() {
            return Err(Error::InvalidArgument(format!("ideal [{a}, {b}]: b must be odd")));
        }
        let c4 = &b * &b - d.big();
        if !(&c4 / 4u32).is_multiple_of(&a) {
            return Err(Error::InvalidArgument(format!(
                "ideal [{a}, {b}]: a must divide (b^2 - D)/4 for D = {d}"
            )));
        }
        let two_a = &a * 2u32;
        let mut b = b.mod_floor(&two_a);
        if b.is_zero() {
            b = two_a;
        }
        Ok(PrimIdeal { a, b })
    }

    pub fn unit() -> Self {
        PrimIdeal { a: BigInt::one(), b: BigInt::one() }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// Coefficients `(a, b, c)` of the primitive form
    /// `N(xα + yβ)/N(𝔞) = a x² + b xy + c y²`.
    pub fn norm_form(&self, d: &Discriminant) -> (BigInt, BigInt, BigInt) {
        let c = (&self.b * &self.b - d.big()) / (&self.a * 4u32);
        (self.a.clone(), self.b.clone(), c)
    }

    fn conjugate(&self, d: &Discriminant) -> PrimIdeal {
        PrimIdeal::new(self.a.clone(), -&self.b, d).expect("conjugate of a valid ideal")
    }
}

/// The fractional ideal `scale · prim` with `scale > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    scale: BigRational,
    prim: PrimIdeal,
}

/// Splitting behaviour of a rational prime in `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal above `p`, with its ramification index in `(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: u64,
    pub kind: SplitKind,
    pub ideal: FracIdeal,
}

impl PrimeIdeal {
    pub fn ramification_index(&self) -> i64 {
        if self.kind == SplitKind::Ramified {
            2
        } else {
            1
        }
    }
}

/// Per-residue counts of `N(λ)/N(𝔞) mod b` over `λ ∈ 𝔞/b𝔞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueProfile {
    pub b: u64,
    pub counts: Vec<u64>,
}

impl ResidueProfile {
    pub fn count(&self, m: i64) -> u64 {
        self.counts[m.rem_euclid(self.b as i64) as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Signs `χ_{D(p)}(N(𝔠)) = (N(𝔠)/p)` over the primes `p | D`, for an ideal
/// `𝔠` of the genus that is coprime to `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusFingerprint {
    signs: BTreeMap<u64, Sign>,
}

impl GenusFingerprint {
    /// Rejects zero entries and sign products other than +1.
    pub fn new(signs: BTreeMap<u64, Sign>) -> Result<Self> {
        if signs.values().any(|&s| s == Sign::Zero) {
            return Err(Error::InvalidArgument("genus signs must be ±1".into()));
        }
        let product = signs.values().fold(Sign::Plus, |acc, &s| acc * s);
        if product != Sign::Plus {
            return Err(Error::InvalidArgument(
                "genus signs must multiply to +1 (χ_D of a norm is 1)".into(),
            ));
        }
        Ok(GenusFingerprint { signs })
    }

    /// The principal genus: all signs +1.
    pub fn principal(d: &Discriminant) -> Self {
        GenusFingerprint { signs: d.ramified_primes().map(|p| (p, Sign::Plus)).collect() }
    }

    pub fn sign(&self, p: u64) -> Sign {
        self.signs.get(&p).copied().unwrap_or(Sign::Zero)
    }

    pub fn signs(&self) -> &BTreeMap<u64, Sign> {
        &self.signs
    }

    /// `χ_{D'}(N(𝔞)) = Π_{p | D'} signs[p]` for a discriminant `D' | D`.
    pub fn character_of(&self, sub_disc: i64) -> Sign {
        self.signs
            .iter()
            .filter(|(&p, _)| sub_disc % p as i64 == 0)
            .fold(Sign::Plus, |acc, (_, &s)| acc * s)
    }
}

impl fmt::Display for GenusFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.signs.iter().map(|(p, s)| format!("{p}:{s:+}", s = s.value())).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl FracIdeal {
    pub fn unit() -> Self {
        FracIdeal { scale: BigRational::one(), prim: PrimIdeal::unit() }
    }

    pub fn new(scale: BigRational, prim: PrimIdeal) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidArgument("ideal scale must be positive".into()));
        }
        Ok(FracIdeal { scale, prim })
    }

    pub fn from_prim(prim: PrimIdeal) -> Self {
        FracIdeal { scale: BigRational::one(), prim }
    }

    /// The principal ideal `q·O_K` of a nonzero rational.
    pub fn from_rational(q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Zero("ideal generator"));
        }
        Ok(FracIdeal { scale: q.abs(), prim: PrimIdeal::unit() })
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn prim(&self) -> &PrimIdeal {
        &self.prim
    }

    pub fn is_unit(&self) -> bool {
        self.scale.is_one() && self.prim == PrimIdeal::unit()
    }

    pub fn is_integral(&self) -> bool {
        self.scale.is_integer()
    }

    /// `N(𝔞) = scale² · a`.
    pub fn norm(&self) -> BigRational {
        &self.scale * &self.scale * rat(self.prim.a.clone())
    }

    /// A Z-basis `(α, β)` with `𝔞 = Zα + Zβ`.
    pub fn z_basis(&self) -> (FieldElem, FieldElem) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let alpha = FieldElem::rational(&self.scale * rat(self.prim.a.clone()));
        let beta = FieldElem::new(
            &self.scale * rat(self.prim.b.clone()) * &half,
            &self.scale * &half,
        );
        (alpha, beta)
    }

    /// The Z-module spanned by `gens`, which must be a full-rank O_K-module.
    pub fn from_z_generators(gens: &[FieldElem], d: &Discriminant) -> Result<Self> {
        let coords: Vec<(BigRational, BigRational)> = gens.iter().map(|g| g.basis_coords()).collect();
        let den = coords
            .iter()
            .fold(BigInt::one(), |l, (x, y)| l.lcm(x.denom()).lcm(y.denom()));
        let vecs: Vec<(BigInt, BigInt)> = coords
            .iter()
            .map(|(x, y)| ((x * rat(den.clone())).to_integer(), (y * rat(den.clone())).to_integer()))
            .collect();

        // 2x2 Hermite reduction: w carries gcd of the ω-coordinates, kernel
        // collects the gcd of the rational-coordinate sublattice.
        let mut w = (BigInt::zero(), BigInt::zero());
        let mut kernel = BigInt::zero();
        for v in vecs {
            if v.1.is_zero() {
                kernel = kernel.gcd(&v.0);
                continue;
            }
            if w.1.is_zero() {
                kernel = kernel.gcd(&w.0);
                w = v;
                continue;
            }
            let eg = w.1.extended_gcd(&v.1);
            let g = eg.gcd;
            let new_w = (&eg.x * &w.0 + &eg.y * &v.0, &eg.x * &w.1 + &eg.y * &v.1);
            let k = (&v.1 / &g) * &w.0 - (&w.1 / &g) * &v.0;
            kernel = kernel.gcd(&k);
            w = new_w;
        }
        if w.1.is_zero() || kernel.is_zero() {
            return Err(Error::InvalidArgument("generators do not span a full-rank lattice".into()));
        }
        if w.1.is_negative() {
            w = (-w.0, -w.1);
        }
        let c = kernel.abs();
        let content = c.gcd(&w.0).gcd(&w.1);
        let a = &c / &content;
        let e = (&w.0 / &content).mod_floor(&a);
        let f = &w.1 / &content;
        if !f.is_one() {
            return Err(Error::Inconsistency(format!(
                "lattice is not an O_K-ideal (primitive ω-index {f})"
            )));
        }
        let prim = PrimIdeal::new(a, e * 2 + 1, d)
            .map_err(|e| Error::Inconsistency(format!("lattice is not an O_K-ideal: {e}")))?;
        Ok(FracIdeal { scale: BigRational::new(content, den), prim })
    }

    /// The principal ideal `(λ)`.
    pub fn principal(lambda: &FieldElem, d: &Discriminant) -> Result<Self> {
        if lambda.x.is_zero() && lambda.y.is_zero() {
            return Err(Error::Zero("ideal generator"));
        }
        let omega = d.omega().to_field();
        FracIdeal::from_z_generators(&[lambda.clone(), lambda.mul(&omega, d)], d)
    }

    pub fn mul(&self, other: &FracIdeal, d: &Discriminant) -> FracIdeal {
        let (a1, b1) = self.z_basis();
        let (a2, b2) = other.z_basis();
        let gens = [a1.mul(&a2, d), a1.mul(&b2, d), b1.mul(&a2, d), b1.mul(&b2, d)];
        FracIdeal::from_z_generators(&gens, d).expect("product of ideals is an ideal")
    }

    pub fn conjugate(&self, d: &Discriminant) -> FracIdeal {
        FracIdeal { scale: self.scale.clone(), prim: self.prim.conjugate(d) }
    }

    /// `𝔞^{-1} = 𝔞' / N(𝔞)`.
    pub fn inverse(&self, d: &Discriminant) -> FracIdeal {
        let scale = (&self.scale * rat(self.prim.a.clone())).recip();
        FracIdeal { scale, prim: self.prim.conjugate(d) }
    }

    pub fn pow(&self, k: i64, d: &Discriminant) -> FracIdeal {
        let base = if k < 0 { self.inverse(d) } else { self.clone() };
        let mut acc = FracIdeal::unit();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base, d);
        }
        acc
    }

    pub fn scaled(&self, q: &BigRational) -> Result<FracIdeal> {
        if q.is_zero() {
            return Err(Error::Zero("ideal scale"));
        }
        Ok(FracIdeal { scale: &self.scale * q.abs(), prim: self.prim.clone() })
    }

    /// Residue counts of the primitive form modulo `b`.
    pub fn residue_norm_profile(&self, b: u64, d: &Discriminant) -> Result<ResidueProfile> {
        self.residue_norm_profile_bounded(b, d, DEFAULT_ENUM_BOUND)
    }

    pub fn residue_norm_profile_bounded(&self, b: u64, d: &Discriminant, bound: u64) -> Result<ResidueProfile> {
        if b == 0 {
            return Err(Error::InvalidArgument("modulus b must be positive".into()));
        }
        if b > bound {
            return Err(Error::EnumerationBound { b, bound });
        }
        let (fa, fb, fc) = self.prim.norm_form(d);
        let bb = BigInt::from(b);
        let reduce = |x: &BigInt| x.mod_floor(&bb).to_u64().expect("residue below modulus");
        let (ca, cb, cc) = (reduce(&fa), reduce(&fb), reduce(&fc));
        Ok(ResidueProfile { b, counts: form_profile(ca, cb, cc, b) })
    }
}

/// Tally of `A x² + B xy + C y² mod b` over `(x, y) ∈ (Z/bZ)²`.
fn form_profile(ca: u64, cb: u64, cc: u64, b: u64) -> Vec<u64> {
    let row = |x: u64, counts: &mut [u64]| {
        let ax2 = ca * (x * x % b) % b;
        let bx = cb * x % b;
        for y in 0..b {
            let val = (ax2 + bx * y % b + cc * (y * y % b) % b) % b;
            counts[val as usize] += 1;
        }
    };
    if b < PARALLEL_THRESHOLD {
        let mut counts = vec![0u64; b as usize];
        for x in 0..b {
            row(x, &mut counts);
        }
        return counts;
    }
    // integer partial tallies, so the sum is independent of the split
    (0..b)
        .into_par_iter()
        .fold(
            || vec![0u64; b as usize],
            |mut acc, x| {
                row(x, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u64; b as usize],
            |mut l, r| {
                l.iter_mut().zip(r).for_each(|(a, c)| *a += c);
                l
            },
        )
}

/// Modular square root of `n` modulo an odd prime `p` (Tonelli-Shanks).
fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    let pow = |mut b: u128, mut e: u64| {
        let mut acc = 1u128;
        b %= p as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        acc
    };
    if pow(n as u128, (p - 1) / 2) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow(z as u128, (p - 1) / 2) == p as u128 - 1)?;
    let mut m = s;
    let mut c = pow(z as u128, q);
    let mut t = pow(n as u128, q);
    let mut r = pow(n as u128, (q + 1) / 2);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p as u128;
            i += 1;
        }
        let mut bpow = c;
        for _ in 0..(m - i - 1) {
            bpow = bpow * bpow % p as u128;
        }
        m = i;
        c = bpow * bpow % p as u128;
        t = t * c % p as u128;
        r = r * bpow % p as u128;
    }
    Some(r as u64)
}

/// The prime ideals above `p`, split primes ordered by their `b` entry.
pub fn prime_above(p: u64, d: &Discriminant) -> Result<Vec<PrimeIdeal>> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let make = |b: u64, kind| -> Result<PrimeIdeal> {
        let prim = PrimIdeal::new(BigInt::from(p), BigInt::from(b), d)?;
        Ok(PrimeIdeal { p, kind, ideal: FracIdeal::from_prim(prim) })
    };
    match d.chi(p as i64) {
        Sign::Zero => Ok(vec![make(p, SplitKind::Ramified)?]),
        Sign::Minus => Ok(vec![PrimeIdeal {
            p,
            kind: SplitKind::Inert,
            ideal: FracIdeal::from_rational(&BigRational::from_integer(BigInt::from(p)))?,
        }]),
        Sign::Plus => {
            let roots: Vec<u64> = if p == 2 {
                vec![1, 3]
            } else {
                let r = sqrt_mod(d.value() % p, p)
                    .ok_or_else(|| Error::Inconsistency(format!("D is not a square mod split prime {p}")))?;
                let odd = |r: u64| if r % 2 == 1 { r } else { r + p };
                let mut rs = vec![odd(r), odd(p - r)];
                rs.sort_unstable();
                rs
            };
            roots.into_iter().map(|b| make(b, SplitKind::Split)).collect()
        }
    }
}

/// Exponent of the prime ideal `prime` in `𝔞`.
pub fn ideal_valuation(ideal: &FracIdeal, prime: &PrimeIdeal, d: &Discriminant) -> i64 {
    let den = ideal.scale.denom().clone();
    let mut current = ideal.scaled(&BigRational::from_integer(den.clone())).expect("nonzero");
    let shift = arith::valuation(&BigRational::from_integer(den), prime.p).expect("nonzero")
        * prime.ramification_index();
    let inv = prime.ideal.inverse(d);
    let mut count = 0i64;
    loop {
        let next = current.mul(&inv, d);
        if !next.is_integral() {
            break;
        }
        current = next;
        count += 1;
    }
    count - shift
}

/// True iff `𝔞` has valuation 0 at every prime above every `p | n`.
pub fn coprime_to(ideal: &FracIdeal, n: i64, d: &Discriminant) -> Result<bool> {
    for p in arith::factorize(n)?.primes() {
        for prime in prime_above(p, d)? {
            if ideal_valuation(ideal, &prime, d) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An integral ideal coprime to `n·D` in the genus of `𝔞`.
pub fn coprime_genus_representative(ideal: &FracIdeal, n: i64, d: &Discriminant) -> Result<FracIdeal> {
    coprime_genus_representative_bounded(ideal, n, d, DEFAULT_SEARCH_RADIUS)
}

/// Search `λ = xα + yβ ∈ 𝔞` over growing boxes for `N(λ) > 0` with
/// `N(λ)/N(𝔞)` coprime to `nD`; then `(λ)𝔞^{-1}` is integral, has norm
/// `N(λ)/N(𝔞)`, and lies in the genus of `𝔞^{-1}`, which is the genus of `𝔞`.
pub fn coprime_genus_representative_bounded(
    ideal: &FracIdeal,
    n: i64,
    d: &Discriminant,
    radius: i64,
) -> Result<FracIdeal> {
    if n == 0 {
        return Err(Error::Zero("coprimality modulus"));
    }
    let nd = n.unsigned_abs() as i128 * d.value() as i128;
    let modulus = i64::try_from(nd).map_err(|_| Error::Overflow("n·D"))?;
    if ideal.is_integral() && coprime_to(ideal, modulus, d)? {
        return Ok(ideal.clone());
    }
    let (fa, fb, fc) = ideal.prim.norm_form(d);
    let big_mod = BigInt::from(modulus);
    let (alpha, beta) = ideal.z_basis();
    for r in 1..=radius {
        for (x, y) in box_ring(r) {
            let (bx, by) = (BigInt::from(x), BigInt::from(y));
            let q = &fa * &bx * &bx + &fb * &bx * &by + &fc * &by * &by;
            if !q.is_positive() || !q.gcd(&big_mod).is_one() {
                continue;
            }
            let lambda = alpha
                .scale(&BigRational::from_integer(bx))
                .add(&beta.scale(&BigRational::from_integer(by)));
            let rep = FracIdeal::principal(&lambda, d)?.mul(&ideal.inverse(d), d);
            if !rep.is_integral() || rep.norm() != BigRational::from_integer(q.clone()) {
                return Err(Error::Inconsistency(format!("representative {rep} has wrong norm")));
            }
            return Ok(rep);
        }
    }
    Err(Error::SearchFailed(radius))
}

/// Lattice points with `max(|x|, |y|) = r`, in a fixed order.
fn box_ring(r: i64) -> impl Iterator<Item = (i64, i64)> {
    (-r..=r).flat_map(move |x| {
        let ys: Vec<i64> = if x.abs() == r { (-r..=r).collect() } else { vec![-r, r] };
        ys.into_iter().map(move |y| (x, y))
    })
}

/// The genus fingerprint of `𝔞`, via a coprime representative if needed.
pub fn genus_fingerprint(ideal: &FracIdeal, d: &Discriminant) -> Result<GenusFingerprint> {
    let rep = if coprime_to(ideal, d.as_i64(), d)? {
        ideal.clone()
    } else {
        coprime_genus_representative(ideal, 1, d)?
    };
    fingerprint_of_coprime(&rep, d)
}

fn fingerprint_of_coprime(ideal: &FracIdeal, d: &Discriminant) -> Result<GenusFingerprint> {
    let norm = ideal.norm();
    let signs = d
        .ramified_primes()
        .map(|p| Ok((p, arith::rational_legendre(&norm, p)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    GenusFingerprint::new(signs)
}

/// A deterministic sample of ideals: `O_K`, every prime above `p ≤ max_p`,
/// plus squares, products, inverses and scaled copies of split primes.
pub fn fixture_ideals(d: &Discriminant, max_p: u64) -> Vec<FracIdeal> {
    let mut out = vec![FracIdeal::unit()];
    let mut split = Vec::new();
    for p in (2..=max_p).filter(|&p| arith::is_prime(p)) {
        for prime in prime_above(p, d).expect("prime") {
            if prime.kind == SplitKind::Split {
                split.push(prime.ideal.clone());
            }
            out.push(prime.ideal);
        }
    }
    if let Some(first) = split.first() {
        out.push(first.mul(first, d));
        out.push(first.inverse(d));
        out.push(first.scaled(&BigRational::new(BigInt::one(), BigInt::from(3))).expect("nonzero"));
        if let Some(second) = split.iter().find(|s| *s != first && s.conjugate(d) != *first) {
            out.push(first.mul(second, d));
            out.push(first.mul(&second.inverse(d), d));
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|i| seen.insert(i.clone()));
    out
}

impl fmt::Display for FracIdeal {
    /// Same grammar as [`parse_ideal`]: `ok`, `prim:a,b` or `frac:num/den:a,b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            write!(f, "ok")
        } else if self.scale.is_one() {
            write!(f, "prim:{},{}", self.prim.a, self.prim.b)
        } else {
            write!(f, "frac:{}/{}:{},{}", self.scale.numer(), self.scale.denom(), self.prim.a, self.prim.b)
        }
    }
}

/// Parses `ok` | `prim:a,b` | `frac:num/den:a,b` | `prime:p,k` (k-th prime
/// above `p`, counting from 1 in [`prime_above`] order).
pub fn parse_ideal(s: &str, d: &Discriminant) -> Result<FracIdeal> {
    let s = s.trim();
    let err = |why: &str| Error::Parse(format!("ideal {s:?}: {why}"));
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| err("expected integers"));
    let pair = |t: &str| -> Result<(BigInt, BigInt)> {
        let (a, b) = t.split_once(',').ok_or_else(|| err("expected a,b"))?;
        Ok((int(a)?, int(b)?))
    };
    if s == "ok" {
        return Ok(FracIdeal::unit());
    }
    if let Some(rest) = s.strip_prefix("prim:") {
        let (a, b) = pair(rest)?;
        return Ok(FracIdeal::from_prim(PrimIdeal::new(a, b, d)?));
    }
    if let Some(rest) = s.strip_prefix("frac:") {
        let (q, ab) = rest.split_once(':').ok_or_else(|| err("expected frac:num/den:a,b"))?;
        let scale = match q.split_once('/') {
            Some((n, m)) => {
                let m = int(m)?;
                if m.is_zero() {
                    return Err(err("zero denominator"));
                }
                BigRational::new(int(n)?, m)
            }
            None => BigRational::from_integer(int(q)?),
        };
        let (a, b) = pair(ab)?;
        return FracIdeal::new(scale, PrimIdeal::new(a, b, d)?);
    }
    if let Some(rest) = s.strip_prefix("prime:") {
        let (p, k) = pair(rest)?;
        let p = p.to_u64().ok_or_else(|| err("p out of range"))?;
        let k = k.to_usize().ok_or_else(|| err("k out of range"))?;
        let primes = prime_above(p, d)?;
        return k
            .checked_sub(1)
            .and_then(|i| primes.get(i))
            .map(|pr| pr.ideal.clone())
            .ok_or_else(|| err(&format!("only {} prime(s) above {p}", primes.len())));
    }
    Err(err("expected ok | prim:a,b | frac:num/den:a,b | prime:p,k"))
}
