use std::process::{Command, Output};

use approx::assert_abs_diff_eq;
use serde_json::Value;

fn trace_afe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trace-afe"))
        .args(args)
        .env_remove("TRACE_AFE_THREADS")
        .output()
        .expect("run trace-afe")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn csv_rows(out: &Output) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(out.stdout.as_slice())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn lvalue_examples() {
    let out = trace_afe(&["lvalue", "-D", "-4", "--route", "afe"]);
    assert_eq!(out.status.code(), Some(0));
    assert_abs_diff_eq!(json(&out)["rows"][0]["value"].as_f64().unwrap(), std::f64::consts::FRAC_PI_4, epsilon = 1e-6);

    let out = trace_afe(&["lvalue", "-D", "-23", "--route", "cnf"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["rows"][0]["value"].as_f64().unwrap();
    assert_abs_diff_eq!(v, 3.0 * std::f64::consts::PI / 23f64.sqrt(), epsilon = 1e-12);

    let out = trace_afe(&["lvalue", "-D", "5", "-s", "1", "--route", "direct", "--tol", "1e-9"]);
    assert_abs_diff_eq!(json(&out)["rows"][0]["value"].as_f64().unwrap(), 0.430_408_940_964_004_4, epsilon = 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(trace_afe(&["lvalue", "-D", "1"]).status.code(), Some(2));
    assert_eq!(trace_afe(&["lvalue", "-D", "-4", "--route", "bogus"]).status.code(), Some(2));
    assert_eq!(trace_afe(&["lvalue", "-D", "-4", "-s", "0.5", "--route", "cnf"]).status.code(), Some(2));
    assert_eq!(trace_afe(&["--tol", "1e-30", "lvalue", "-D", "-4", "--route", "afe"]).status.code(), Some(3));
    assert_eq!(trace_afe(&["verify", "kottwitz"]).status.code(), Some(3));
    assert_eq!(trace_afe(&["--help"]).status.code(), Some(0));
}

#[test]
fn elliptic_table() {
    let out = trace_afe(&["elliptic", "-p", "2", "-k", "2", "-M", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.lines().nth(1).unwrap() == "m,sign,delta,s_gamma,D_E,volume,padic_product,term");
    let rows = csv_rows(&out);
    let zero = rows.iter().find(|r| &r[0] == "0" && &r[1] == "1").unwrap();
    assert_eq!((&zero[2], &zero[3], &zero[4], &zero[6]), ("-16", "2", "-4", "3"));
    // det = -4 gives delta = 16, a square.
    assert!(!rows.iter().any(|r| &r[0] == "0" && &r[1] == "-1"));

    let out = trace_afe(&["elliptic", "-p", "2", "-k", "1", "-M", "0", "--include-squares", "--format", "csv"]);
    let rows = csv_rows(&out);
    let deltas: Vec<&str> = rows.iter().map(|r| r.get(2).unwrap()).collect();
    assert_eq!(deltas, vec!["-8", "8"]);

    let out = trace_afe(&["elliptic", "-p", "3", "-k", "2", "-M", "6", "--include-squares"]);
    let v = json(&out);
    let square = v["rows"].as_array().unwrap().iter().find(|r| r["delta"] == 0).unwrap();
    assert!(square["volume"].is_null() && square["term"].is_null());
}

#[test]
fn reports_embed_config() {
    let out = trace_afe(&["--seed", "9", "verify", "split", "--configs", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cfg = &v["config"];
    assert_eq!(cfg["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(cfg["seed"], 9);
    assert_eq!(cfg["suite"], "split");
    assert_eq!(cfg["configs"], 5);
    assert!(cfg.get("threads").is_none());
    assert_eq!(v["summary"]["cases"], 5);
}

#[test]
fn verify_suites_pass() {
    let out = trace_afe(&["verify", "decay", "-m", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = trace_afe(&["verify", "smooth", "--negative-control"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let controls: Vec<&Value> =
        v["rows"].as_array().unwrap().iter().filter(|r| r["case"] == "negative control").collect();
    assert_eq!(controls.len(), 2);
    assert!(controls.iter().all(|r| r["passed"] == true && r["finest"].as_f64().unwrap() > 1e-2));

    let out = trace_afe(&["verify", "lfunsum", "--pmax", "3", "--kmax", "2", "--mmax", "12"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["verify", "lfunsum", "--pmax", "3", "--kmax", "2", "--mmax", "12", "--format", "csv"];
    let one = trace_afe(&[&args[..], &["--threads", "1"]].concat());
    let eight = Command::new(env!("CARGO_BIN_EXE_trace-afe"))
        .args(args)
        .env("TRACE_AFE_THREADS", "8")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
    assert!(String::from_utf8_lossy(&eight.stderr).contains("threads: 8"));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("trace-afe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = trace_afe(&["verify", "stirling", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["summary"]["cases"], 400);
    std::fs::remove_dir_all(&dir).unwrap();
}
