//! Self-check suites: closed formulas against enumeration, Gauss sums,
//! divisor-sum identities and the series identity.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith;
use crate::dirichlet;
use crate::divisor::{self, SigmaQuery};
use crate::error::Result;
use crate::gauss;
use crate::ideals::{self, FracIdeal, GenusFingerprint};
use crate::quadfield::Discriminant;
use crate::repnum::RepCounter;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub discs: Vec<i64>,
    /// Largest modulus for enumeration checks.
    pub max_b: u64,
    pub max_m: i64,
    /// Largest prime power for Gauss sum checks.
    pub max_prime_power: u64,
    pub truncation: u64,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            discs: vec![5, 13, 17, 21, 33, 57],
            max_b: 30,
            max_m: 15,
            max_prime_power: 125,
            truncation: 5000,
            tolerance: 1e-3,
        }
    }
}

/// Fixture ideals of `D`, with one representative per genus first.
pub fn genus_fixtures(d: &Discriminant) -> Result<Vec<(FracIdeal, GenusFingerprint)>> {
    let mut out = Vec::new();
    for ideal in ideals::fixture_ideals(d, 30) {
        let fp = ideals::genus_fingerprint(&ideal, d)?;
        out.push((ideal, fp));
    }
    Ok(out)
}

/// One ideal per genus.
pub fn genus_representatives(d: &Discriminant) -> Result<BTreeMap<GenusFingerprint, FracIdeal>> {
    let mut map = BTreeMap::new();
    for (ideal, fp) in genus_fixtures(d)? {
        map.entry(fp).or_insert(ideal);
    }
    Ok(map)
}

fn small_fixtures(d: &Discriminant) -> Result<Vec<FracIdeal>> {
    let mut out = ideals::fixture_ideals(d, 7);
    for ideal in genus_representatives(d)?.into_values() {
        if !out.contains(&ideal) {
            out.push(ideal);
        }
    }
    Ok(out)
}

/// Formula-based `N_b` against enumeration.
pub fn oracle_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut failures = Vec::new();
    for &dv in &cfg.discs {
        let d = Discriminant::new(dv)?;
        let counter = RepCounter::new(d.clone());
        for ideal in small_fixtures(&d)? {
            let rows: Vec<(u64, Vec<String>)> = (1..=cfg.max_b)
                .into_par_iter()
                .map(|b| -> Result<(u64, Vec<String>)> {
                    let profile = ideal.residue_norm_profile(b, &d)?;
                    let mut bad = Vec::new();
                    let mut n = 0;
                    for m in -cfg.max_m..=cfg.max_m {
                        n += 1;
                        let formula = counter.rep_count(&ideal, m, b)?;
                        if formula != profile.count(m) {
                            bad.push(format!("D={dv} ideal={ideal} b={b} m={m}: formula {formula}, brute {}", profile.count(m)));
                        }
                    }
                    Ok((n, bad))
                })
                .collect::<Result<_>>()?;
            for (n, bad) in rows {
                cases += n;
                failures.extend(bad);
            }
        }
    }
    Ok(SuiteResult { name: "oracle", cases, failures })
}

/// Direct Gauss sums against closed values, and classical sums.
pub fn gauss_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut failures = Vec::new();
    let powers: Vec<(u64, u32)> = (2..=cfg.max_prime_power)
        .filter(|&p| arith::is_prime(p))
        .flat_map(|p| (1..).map(move |k| (p, k)).take_while(move |&(p, k)| p.pow(k) <= cfg.max_prime_power))
        .collect();
    for &dv in &cfg.discs {
        let d = Discriminant::new(dv)?;
        for ideal in small_fixtures(&d)? {
            for &(p, beta) in &powers {
                let target = if d.divides(p) && !ideals::coprime_to(&ideal, p as i64, &d)? {
                    ideals::coprime_genus_representative(&ideal, p as i64, &d)?
                } else {
                    ideal.clone()
                };
                let profile = ideal.residue_norm_profile(p.pow(beta), &d)?;
                for a in -cfg.max_m..=cfg.max_m {
                    cases += 1;
                    let direct = gauss::eval_complex(&gauss::gauss_from_profile(&profile, a));
                    let closed = gauss::gauss_closed(&target, a, p, beta, &d)?.to_complex();
                    if (direct - closed).norm() > 1e-6 {
                        failures.push(format!("D={dv} ideal={ideal} b={p}^{beta} a={a}: {direct} vs {closed}"));
                    }
                }
            }
        }
    }
    for c in (1..100u64).step_by(2) {
        for a in -cfg.max_m..=cfg.max_m {
            if num_integer::Integer::gcd(&a, &(c as i64)) != 1 {
                continue;
            }
            cases += 1;
            let (closed, direct) = gauss::classical_gauss(a, c)?;
            let diff = (gauss::eval_complex(&direct) - closed.to_complex()).norm();
            if diff > 1e-6 {
                failures.push(format!("classical a={a} c={c}: off by {diff}"));
            }
        }
    }
    Ok(SuiteResult { name: "gauss", cases, failures })
}

/// Three forms of `σ`, the functional equation, vanishing and sign products.
pub fn sigma_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut failures = Vec::new();
    let grid = [-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0];
    for &dv in &cfg.discs {
        let d = Discriminant::new(dv)?;
        for fp in genus_representatives(&d)?.into_keys() {
            for m in (-cfg.max_m..=cfg.max_m).filter(|&m| m != 0) {
                for &s in &grid {
                    cases += 1;
                    let q = SigmaQuery::new(d.clone(), fp.clone(), m, s)?;
                    let def = divisor::sigma_def(&q)?;
                    let values = [
                        ("decomp", divisor::sigma_decomp(&q)?),
                        ("euler", divisor::sigma_euler(&q)?),
                        ("mirror", divisor::sigma_def(&q.with_s(-s))?),
                    ];
                    for (name, v) in values {
                        if arith::relative_error(def, v) > 1e-12 {
                            failures.push(format!("D={dv} {fp} m={m} s={s}: def {def}, {name} {v}"));
                        }
                    }
                }
                let zero = [0.0, 1.0].iter().try_fold(true, |acc, &s| -> Result<bool> {
                    let v = divisor::sigma_def(&SigmaQuery::new(d.clone(), fp.clone(), m, s)?)?;
                    Ok(acc && v.abs() < 1e-12)
                })?;
                if zero != divisor::sigma_vanishes(&fp, m)? {
                    failures.push(format!("D={dv} {fp} m={m}: vanishing criterion disagrees"));
                }
                for dec in divisor::disc_decompositions(&d) {
                    cases += 1;
                    let (l, r) = divisor::ramified_sign_product(&d, dec.d2, m, &fp)?;
                    if l != r {
                        failures.push(format!("D={dv} D2={} m={m} {fp}: {l} vs {r}", dec.d2));
                    }
                }
            }
        }
    }
    Ok(SuiteResult { name: "sigma", cases, failures })
}

/// The series identity for every genus and a fixed set of `m`.
pub fn theorem_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut failures = Vec::new();
    for &dv in &cfg.discs {
        let d = Discriminant::new(dv)?;
        for fp in genus_representatives(&d)?.into_keys() {
            for m in [0, 1, -1, 2, -2, 3, 4, 5] {
                cases += 1;
                let report = dirichlet::verify_theorem(&fp, &d, m, 4.0, cfg.truncation, cfg.tolerance)?;
                if !report.pass {
                    failures.push(format!(
                        "D={dv} {fp} m={m}: lhs {} rhs {} rel {:e}",
                        report.lhs.value, report.rhs.value, report.relative_error
                    ));
                }
            }
        }
    }
    Ok(SuiteResult { name: "theorem", cases, failures })
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteResult>> {
    Ok(match name {
        "oracle" => vec![oracle_suite(cfg)?],
        "gauss" => vec![gauss_suite(cfg)?],
        "sigma" => vec![sigma_suite(cfg)?],
        "theorem" => vec![theorem_suite(cfg)?],
        "all" => vec![oracle_suite(cfg)?, gauss_suite(cfg)?, sigma_suite(cfg)?, theorem_suite(cfg)?],
        other => return Err(crate::Error::InvalidArgument(format!("unknown suite {other}"))),
    })
}
