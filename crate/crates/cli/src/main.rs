use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quadrep::ideals::{self, FracIdeal};
use quadrep::verify::{self, SuiteConfig};
use quadrep::{arith, dirichlet, divisor, gauss, repnum, Discriminant, ExactGaussValue, RepCounter, SigmaQuery};

mod config;
mod output;

use config::{CliConfig, OutputFormat};
use output::{float, int, object, rational};

#[derive(Parser, Debug)]
#[command(name = "quadrep", version, about = "Representation numbers, Gauss sums and Dirichlet series for real quadratic fields")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    /// Config file with key=value lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print run metadata (version, time) to stderr.
    #[arg(long, global = true)]
    meta: bool,
    /// Largest modulus for enumeration.
    #[arg(long = "max-b", global = true, env = "QUADREP_MAX_B")]
    max_b: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Representation numbers N_b(a, m).
    Repnum(RepnumArgs),
    /// Gauss sums G_b(a, a) or classical sums.
    Gauss(GaussArgs),
    /// Generalized divisor sum sigma(a, m, s).
    Sigma(SigmaArgs),
    /// Both sides of the Dirichlet series identity.
    Series(SeriesArgs),
    /// Genus fingerprint and a representative coprime to D.
    Genus(GenusArgs),
    /// Ideal arithmetic.
    Ideal(IdealArgs),
    /// Run a self-check suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Discriminant D (odd, squarefree, 1 mod 4, > 1).
    #[arg(long)]
    disc: i64,
    /// Ideal: ok | prim:a,b | frac:num/den:a,b | prime:p,k
    #[arg(long, default_value = "ok")]
    ideal: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RepMethod {
    Brute,
    Formula,
    GaussDft,
    All,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct RepnumArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    b: u64,
    #[arg(long, value_enum, default_value = "formula")]
    method: RepMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GaussMethod {
    Direct,
    Closed,
    All,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct GaussArgs {
    #[arg(long, required_unless_present = "classical")]
    disc: Option<i64>,
    #[arg(long, default_value = "ok")]
    ideal: String,
    #[arg(long)]
    a: i64,
    /// Modulus (the odd c of the classical sum with --classical).
    #[arg(long)]
    b: u64,
    #[arg(long, value_enum, default_value = "all")]
    method: GaussMethod,
    /// Classical sum over x mod b of e(a x^2 / b).
    #[arg(long)]
    classical: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SigmaForm {
    Def,
    Decomp,
    Euler,
    All,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SigmaArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    s: f64,
    #[arg(long, value_enum, default_value = "def")]
    form: SigmaForm,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SeriesArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    s: f64,
    /// Truncation point.
    #[arg(long = "B")]
    truncation: Option<u64>,
    /// Exit with status 3 unless both sides agree.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    tol: Option<f64>,
    /// Also sum the left side from brute-force counts (B <= 60).
    #[arg(long)]
    oracle: bool,
    /// Also report the residue at s = 2.
    #[arg(long)]
    residue: bool,
}

#[derive(Args, Debug)]
struct GenusArgs {
    #[command(flatten)]
    field: FieldArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IdealOp {
    Norm,
    Mul,
    Inverse,
    Conjugate,
    PrimesAbove,
    Valuation,
    Profile,
}

#[derive(Args, Debug)]
struct IdealArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum)]
    op: IdealOp,
    /// Second factor for mul.
    #[arg(long)]
    other: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Oracle,
    Gauss,
    Sigma,
    Theorem,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long)]
    tol: Option<f64>,
}

/// Result payload plus whether a requested agreement check held.
struct Report {
    value: Value,
    verified: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, verified: true }
    }
}

type CmdResult = Result<Report, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn discriminant(d: i64) -> Result<Discriminant, String> {
    Discriminant::new(d).map_err(err)
}

fn field(args: &FieldArgs) -> Result<(Discriminant, FracIdeal), String> {
    let d = discriminant(args.disc)?;
    let ideal = ideals::parse_ideal(&args.ideal, &d).map_err(err)?;
    Ok((d, ideal))
}

fn check_factor(n: u128, what: &str, cfg: &CliConfig) -> Result<(), String> {
    if n > cfg.max_factor_bound as u128 {
        return Err(format!("{what} = {n} exceeds max_factor_bound {}", cfg.max_factor_bound));
    }
    Ok(())
}

fn check_enum(b: u64, cfg: &CliConfig) -> Result<(), String> {
    if b > cfg.max_enum_b {
        return Err(format!("modulus {b} exceeds max_enum_b {}", cfg.max_enum_b));
    }
    Ok(())
}

/// `b = p^β` with `β ≥ 1`, or `None`.
fn prime_power(b: u64, cfg: &CliConfig) -> Result<Option<(u64, u32)>, String> {
    check_factor(b as u128, "b", cfg)?;
    let f = arith::factorize(b as i64).map_err(err)?;
    Ok(match f.factors() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    })
}

fn run_repnum(a: &RepnumArgs, cfg: &CliConfig) -> CmdResult {
    let (d, ideal) = field(&a.field)?;
    if a.b == 0 {
        return Err("b must be positive".into());
    }
    check_factor(a.b as u128, "b", cfg)?;
    check_factor(a.m.unsigned_abs() as u128, "|m|", cfg)?;
    let want = |m: RepMethod| a.method == m || a.method == RepMethod::All;
    let mut results: Vec<(&str, Value)> = Vec::new();
    let mut values = Vec::new();
    if want(RepMethod::Formula) {
        let n = RepCounter::new(d.clone()).rep_count(&ideal, a.m, a.b).map_err(err)?;
        values.push(n);
        results.push(("formula", int(n)));
    }
    if want(RepMethod::Brute) {
        let profile = ideal.residue_norm_profile_bounded(a.b, &d, cfg.max_enum_b).map_err(err)?;
        values.push(profile.count(a.m));
        results.push(("brute", int(profile.count(a.m))));
    }
    if want(RepMethod::GaussDft) {
        let pp = if a.b == 1 { Some((2, 0)) } else { prime_power(a.b, cfg)? };
        match pp {
            Some((p, beta)) => {
                check_enum(a.b, cfg)?;
                let n = repnum::rep_from_gauss_dft(&ideal, a.m, p, beta, &d).map_err(err)?;
                values.push(n);
                results.push(("gauss_dft", int(n)));
            }
            None if a.method == RepMethod::GaussDft => {
                return Err(format!("gauss-dft needs a prime power modulus, got {}", a.b));
            }
            None => results.push(("gauss_dft", Value::Null)),
        }
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let mut pairs = vec![
        ("D", int(d.value())),
        ("ideal", json!(ideal.to_string())),
        ("m", int(a.m)),
        ("b", int(a.b)),
        ("N", int(values[0])),
    ];
    if a.method == RepMethod::All {
        pairs.push(("agree", json!(agree)));
        pairs.push(("methods", object(results)));
    }
    Ok(Report { value: object(pairs), verified: agree })
}

fn gauss_value(v: &ExactGaussValue) -> Value {
    let z = v.to_complex();
    let mut pairs = vec![("kind", json!(v.kind())), ("coeff", rational(v.coeff()))];
    if let ExactGaussValue::Ramified { p, .. } = v {
        pairs.push(("p", int(*p)));
    }
    pairs.push(("complex", json!([float(z.re), float(z.im)])));
    object(pairs)
}

fn run_gauss(a: &GaussArgs, cfg: &CliConfig) -> CmdResult {
    let (closed, direct, extra) = if a.classical {
        check_enum(a.b, cfg)?;
        let (closed, direct) = gauss::classical_gauss(a.a, a.b).map_err(err)?;
        let closed = (a.method != GaussMethod::Direct).then_some(closed);
        let direct = (a.method != GaussMethod::Closed).then_some(direct);
        (closed, direct, None)
    } else {
        let d = discriminant(a.disc.expect("required by clap"))?;
        let ideal = ideals::parse_ideal(&a.ideal, &d).map_err(err)?;
        let direct = if a.method != GaussMethod::Closed {
            Some(gauss::gauss_direct_bounded(&ideal, a.a, a.b, &d, cfg.max_enum_b).map_err(err)?)
        } else {
            None
        };
        let mut extra = None;
        let closed = if a.method != GaussMethod::Direct {
            let (p, beta) = if a.b == 1 {
                (2, 0)
            } else {
                prime_power(a.b, cfg)?.ok_or_else(|| format!("closed form needs a prime power b, got {}", a.b))?
            };
            match gauss::gauss_closed(&ideal, a.a, p, beta, &d) {
                Ok(v) => Some(v),
                Err(quadrep::Error::NeedGenusRepresentative(p)) => {
                    let rep = ideals::coprime_genus_representative(&ideal, p as i64, &d).map_err(err)?;
                    extra = Some(rep.to_string());
                    Some(gauss::gauss_closed(&rep, a.a, p, beta, &d).map_err(err)?)
                }
                Err(e) => return Err(err(e)),
            }
        } else {
            None
        };
        (closed, direct, extra)
    };
    let direct_json = direct.as_ref().map(|v| {
        let z = gauss::eval_complex(v);
        object(vec![
            ("b", int(v.b)),
            ("a", int(a.a)),
            ("counts", Value::Array(v.counts.iter().map(|&c| int(c)).collect())),
            ("complex", json!([float(z.re), float(z.im)])),
        ])
    });
    Ok(match (closed, direct, direct_json) {
        (Some(c), Some(d), Some(dj)) => {
            let diff = (c.to_complex() - gauss::eval_complex(&d)).norm();
            let agree = diff <= 1e-6;
            let mut pairs = vec![("closed", gauss_value(&c)), ("direct", dj), ("abs_diff", float(diff)), ("agree", json!(agree))];
            if let Some(rep) = extra {
                pairs.push(("representative", json!(rep)));
            }
            Report { value: object(pairs), verified: agree }
        }
        (Some(c), _, _) => {
            let mut v = gauss_value(&c);
            if let (Some(rep), Value::Object(map)) = (extra, &mut v) {
                map.insert("representative".into(), json!(rep));
            }
            Report::ok(v)
        }
        (None, _, Some(dj)) => Report::ok(dj),
        _ => unreachable!("at least one method runs"),
    })
}

fn run_sigma(a: &SigmaArgs) -> CmdResult {
    let (d, ideal) = field(&a.field)?;
    let fp = ideals::genus_fingerprint(&ideal, &d).map_err(err)?;
    let q = SigmaQuery::new(d, fp, a.m, a.s).map_err(err)?;
    let forms: Vec<(&str, fn(&SigmaQuery) -> quadrep::Result<f64>)> = vec![
        ("def", divisor::sigma_def),
        ("decomp", divisor::sigma_decomp),
        ("euler", divisor::sigma_euler),
    ];
    let mut pairs = Vec::new();
    let mut values = Vec::new();
    for (name, f) in forms {
        let selected = matches!(
            (a.form, name),
            (SigmaForm::All, _) | (SigmaForm::Def, "def") | (SigmaForm::Decomp, "decomp") | (SigmaForm::Euler, "euler")
        );
        if selected {
            let v = f(&q).map_err(err)?;
            values.push(v);
            pairs.push((name, float(v)));
        }
    }
    let agree = values.windows(2).all(|w| arith::relative_error(w[0], w[1]) <= 1e-12);
    Ok(Report { value: object(pairs), verified: agree })
}

fn run_series(a: &SeriesArgs, cfg: &CliConfig) -> CmdResult {
    let (d, ideal) = field(&a.field)?;
    let b = a.truncation.unwrap_or(cfg.truncation);
    let tol = a.tol.unwrap_or(cfg.tolerance);
    if !(tol > 0.0) {
        return Err("tolerance must be positive".into());
    }
    check_factor(b as u128 * d.value() as u128, "B·D", cfg)?;
    let fp = ideals::genus_fingerprint(&ideal, &d).map_err(err)?;
    let report = dirichlet::verify_theorem(&fp, &d, a.m, a.s, b, tol).map_err(err)?;
    let factors: Vec<Value> = report
        .factors
        .iter()
        .map(|f| {
            object(vec![
                ("p", int(f.p)),
                ("lhs", float(f.lhs)),
                ("rhs", float(f.rhs)),
                ("tail_bound", float(f.tail_bound)),
                ("pass", json!(f.pass)),
            ])
        })
        .collect();
    let mut pass = report.pass;
    let mut pairs = vec![
        ("D", int(d.value())),
        ("ideal", json!(ideal.to_string())),
        ("fingerprint", json!(fp.to_string())),
        ("m", int(a.m)),
        ("s", float(a.s)),
        ("lhs", output::series(&report.lhs)),
        ("rhs", output::series(&report.rhs)),
        ("relative_error", float(report.relative_error)),
        ("tolerance", float(tol)),
        ("factors", Value::Array(factors)),
    ];
    if a.oracle {
        if b > 60 {
            return Err(format!("--oracle needs B <= 60, got {b}"));
        }
        check_enum(b * d.value(), cfg)?;
        let brute = dirichlet::series_lhs_oracle(&ideal, &d, a.m, a.s, b).map_err(err)?;
        let agree = arith::relative_error(brute.value, report.lhs.value) <= 1e-12;
        pass &= agree;
        pairs.push(("lhs_oracle", output::series(&brute)));
        pairs.push(("oracle_agree", json!(agree)));
    }
    if a.residue {
        let r = dirichlet::residue_at_2(&fp, &d, a.m, b.max(100_000)).map_err(err)?;
        pairs.push(("residue_at_2", float(r)));
    }
    pairs.push(("pass", json!(pass)));
    Ok(Report { value: object(pairs), verified: !a.verify || pass })
}

fn fingerprint_json(fp: &quadrep::GenusFingerprint) -> Value {
    Value::Object(fp.signs().iter().map(|(p, s)| (p.to_string(), json!(s.value()))).collect())
}

fn run_genus(a: &GenusArgs) -> CmdResult {
    let (d, ideal) = field(&a.field)?;
    let fp = ideals::genus_fingerprint(&ideal, &d).map_err(err)?;
    let rep = ideals::coprime_genus_representative(&ideal, 1, &d).map_err(err)?;
    Ok(Report::ok(object(vec![
        ("D", int(d.value())),
        ("ideal", json!(ideal.to_string())),
        ("coprime_to_D", json!(ideals::coprime_to(&ideal, d.as_i64(), &d).map_err(err)?)),
        ("fingerprint", fingerprint_json(&fp)),
        ("representative", json!(rep.to_string())),
        ("representative_norm", rational(&rep.norm())),
    ])))
}

fn run_ideal(a: &IdealArgs, cfg: &CliConfig) -> CmdResult {
    let (d, ideal) = field(&a.field)?;
    let need_p = || a.p.ok_or_else(|| "--p is required for this operation".to_string());
    let described = |i: &FracIdeal| {
        object(vec![
            ("ideal", json!(i.to_string())),
            ("norm", rational(&i.norm())),
            ("integral", json!(i.is_integral())),
        ])
    };
    let value = match a.op {
        IdealOp::Norm => {
            let (alpha, beta) = ideal.z_basis();
            let mut v = described(&ideal);
            if let Value::Object(map) = &mut v {
                map.insert("z_basis".into(), json!([alpha.to_string(), beta.to_string()]));
            }
            v
        }
        IdealOp::Mul => {
            let other = a.other.as_deref().ok_or("--other is required for mul")?;
            let other = ideals::parse_ideal(other, &d).map_err(err)?;
            described(&ideal.mul(&other, &d))
        }
        IdealOp::Inverse => described(&ideal.inverse(&d)),
        IdealOp::Conjugate => described(&ideal.conjugate(&d)),
        IdealOp::PrimesAbove => {
            let p = need_p()?;
            let primes = ideals::prime_above(p, &d).map_err(err)?;
            let kind = primes.first().map(|q| format!("{:?}", q.kind).to_lowercase()).unwrap_or_default();
            object(vec![
                ("p", int(p)),
                ("kind", json!(kind)),
                ("primes", Value::Array(primes.iter().map(|q| described(&q.ideal)).collect())),
            ])
        }
        IdealOp::Valuation => {
            let p = need_p()?;
            let primes = ideals::prime_above(p, &d).map_err(err)?;
            let rows = primes
                .iter()
                .map(|q| {
                    object(vec![
                        ("prime", json!(q.ideal.to_string())),
                        ("valuation", int(ideals::ideal_valuation(&ideal, q, &d))),
                    ])
                })
                .collect();
            object(vec![("ideal", json!(ideal.to_string())), ("p", int(p)), ("valuations", Value::Array(rows))])
        }
        IdealOp::Profile => {
            let b = a.b.ok_or("--b is required for profile")?;
            let profile = ideal.residue_norm_profile_bounded(b, &d, cfg.max_enum_b).map_err(err)?;
            object(vec![
                ("ideal", json!(ideal.to_string())),
                ("b", int(b)),
                ("counts", Value::Array(profile.counts.iter().map(|&c| int(c)).collect())),
            ])
        }
    };
    Ok(Report::ok(value))
}

fn run_verify(a: &VerifyArgs, cfg: &CliConfig) -> CmdResult {
    let suite_cfg = SuiteConfig {
        max_b: SuiteConfig::default().max_b.min(cfg.max_enum_b),
        truncation: cfg.truncation,
        tolerance: a.tol.unwrap_or(cfg.tolerance),
        ..SuiteConfig::default()
    };
    let name = match a.suite {
        Suite::Oracle => "oracle",
        Suite::Gauss => "gauss",
        Suite::Sigma => "sigma",
        Suite::Theorem => "theorem",
        Suite::All => "all",
    };
    let results = verify::run_suite(name, &suite_cfg).map_err(err)?;
    let verified = results.iter().all(|r| r.pass());
    let rows = results
        .iter()
        .map(|r| {
            object(vec![
                ("suite", json!(r.name)),
                ("cases", int(r.cases)),
                ("failures", int(r.failures.len() as u64)),
                ("first_failure", r.failures.first().map_or(Value::Null, |f| json!(f))),
                ("pass", json!(r.pass())),
            ])
        })
        .collect();
    Ok(Report { value: Value::Array(rows), verified })
}

fn load_config(cli: &Cli) -> Result<CliConfig, String> {
    let mut cfg = CliConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    if let Some(b) = cli.max_b {
        cfg.max_enum_b = b;
    }
    if let Some(o) = cli.output {
        cfg.output = o;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Repnum(a) => run_repnum(a, &cfg),
        Command::Gauss(a) => run_gauss(a, &cfg),
        Command::Sigma(a) => run_sigma(a),
        Command::Series(a) => run_series(a, &cfg),
        Command::Genus(a) => run_genus(a),
        Command::Ideal(a) => run_ideal(a, &cfg),
        Command::Verify(a) => run_verify(a, &cfg),
    };
    if cli.meta {
        let unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let meta = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "unix_time": unix,
            "elapsed_ms": start.elapsed().as_millis() as u64,
        });
        eprintln!("{meta}");
    }
    match result {
        Ok(report) => {
            print!("{}", output::render(&report.value, cfg.output));
            if report.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
