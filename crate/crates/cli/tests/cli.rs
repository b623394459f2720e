use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadrep"))
        .args(args)
        .env_remove("QUADREP_MAX_B")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn repnum_methods_agree() {
    let out = run(&["repnum", "--disc", "5", "--ideal", "ok", "--m", "1", "--b", "4", "--method", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["N"], 6);
    assert_eq!(v["agree"], true);
    assert_eq!(v["methods"]["gauss_dft"], 6);
}

#[test]
fn gauss_dft_is_null_for_composite_modulus() {
    let v = json(&run(&["repnum", "--disc", "13", "--m", "-3", "--b", "12", "--method", "all"]));
    assert_eq!(v["methods"]["gauss_dft"], Value::Null);
    assert_eq!(v["methods"]["brute"], v["methods"]["formula"]);
}

#[test]
fn series_verifies() {
    let out = run(&["series", "--disc", "5", "--ideal", "ok", "--m", "1", "--s", "4", "--B", "5000", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn series_verification_failure_exits_3() {
    let out = run(&["series", "--disc", "5", "--m", "1", "--s", "4", "--B", "3", "--tol", "1e-9", "--verify"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn series_oracle_matches() {
    let v = json(&run(&["series", "--disc", "21", "--ideal", "prime:3,1", "--m", "2", "--s", "3", "--B", "40", "--oracle"]));
    assert_eq!(v["oracle_agree"], true);
    assert!(run(&["series", "--disc", "5", "--m", "1", "--s", "4", "--B", "61", "--oracle"]).status.code() == Some(1));
}

#[test]
fn sigma_forms() {
    let v = json(&run(&["sigma", "--disc", "21", "--ideal", "ok", "--m", "1", "--s", "0", "--form", "all"]));
    for key in ["def", "decomp", "euler"] {
        assert_eq!(v[key], 4.0, "{key}");
    }
}

#[test]
fn negative_arguments_parse() {
    let out = run(&["sigma", "--disc", "5", "--m", "-4", "--s", "-1.5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn closed_gauss_uses_representative() {
    let v = json(&run(&["gauss", "--disc", "21", "--ideal", "prime:3,1", "--a", "1", "--b", "9"]));
    assert_eq!(v["agree"], true);
    assert_eq!(v["closed"]["kind"], "ramified");
    assert!(v["representative"].is_string());
}

#[test]
fn classical_gauss_sum() {
    let v = json(&run(&["gauss", "--classical", "--a", "1", "--b", "7", "--method", "closed"]));
    assert_eq!(v["coeff"], "1/1");
    assert!((v["complex"][1].as_f64().unwrap() - 7f64.sqrt()).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["repnum", "--disc", "5"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["repnum", "--disc", "5", "--m", "1", "--b", "4", "--output", "xml"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_1() {
    let out = run(&["repnum", "--disc", "4", "--m", "1", "--b", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn output_is_byte_stable() {
    let args = ["series", "--disc", "13", "--ideal", "ok", "--m", "3", "--s", "2.5", "--B", "800", "--meta"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("version"));
}

#[test]
fn csv_and_plain_formats() {
    let base = ["repnum", "--disc", "5", "--m", "1", "--b", "4"];
    let csv = run(&[&base[..], &["--output", "csv"]].concat());
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "D,N,b,ideal,m\n5,6,4,ok,1\n");
    let plain = run(&[&base[..], &["--output", "plain"]].concat());
    assert!(String::from_utf8(plain.stdout).unwrap().contains("N: 6\n"));
}

#[test]
fn env_and_flag_override_enumeration_bound() {
    let args = ["repnum", "--disc", "5", "--m", "1", "--b", "40", "--method", "brute"];
    let limited = Command::new(env!("CARGO_BIN_EXE_quadrep")).args(args).env("QUADREP_MAX_B", "30").output().unwrap();
    assert_eq!(limited.status.code(), Some(1));
    let flag = Command::new(env!("CARGO_BIN_EXE_quadrep"))
        .args(args)
        .args(["--max-b", "50"])
        .env("QUADREP_MAX_B", "30")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn config_file_sets_defaults() {
    let path = std::env::temp_dir().join(format!("quadrep-cli-test-{}.conf", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# test\noutput = plain\nmax_enum_b = 10").unwrap();
    drop(f);
    let p = path.to_str().unwrap();
    let out = run(&["repnum", "--config", p, "--disc", "5", "--m", "1", "--b", "4", "--method", "brute"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("D: 5\n"));
    let over = run(&["repnum", "--config", p, "--disc", "5", "--m", "1", "--b", "20", "--method", "brute"]);
    assert_eq!(over.status.code(), Some(1));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn ideal_operations() {
    let v = json(&run(&["ideal", "--disc", "21", "--op", "primes-above", "--p", "5"]));
    assert_eq!(v["kind"], "split");
    assert_eq!(v["primes"].as_array().unwrap().len(), 2);
    let v = json(&run(&["ideal", "--disc", "21", "--op", "mul", "--ideal", "prime:5,1", "--other", "prime:5,2"]));
    assert_eq!(v["norm"], "25/1");
    let v = json(&run(&["ideal", "--disc", "5", "--op", "profile", "--b", "4"]));
    assert_eq!(v["counts"], serde_json::json!([4, 6, 0, 6]));
}

#[test]
fn genus_reports_representative() {
    let v = json(&run(&["genus", "--disc", "21", "--ideal", "prime:3,1"]));
    assert_eq!(v["fingerprint"]["3"], -1);
    assert_eq!(v["coprime_to_D"], false);
}
