use std::process::{Command, Output};

use serde_json::Value;

fn pantograph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pantograph")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eval_degenerates_to_exp() {
    let v = json(&pantograph(&["eval", "--fn", "E", "--alpha", "1", "--x", "1"]));
    assert_eq!(v["command"], "eval");
    assert_eq!(v["results"]["value"].as_f64().unwrap(), std::f64::consts::E);
    assert!(v["diagnostics"]["error_estimates"]["value"].as_f64().unwrap() < 1e-14);
}

#[test]
fn eval_accepts_negative_arguments_and_derivatives() {
    let v = json(&pantograph(&["eval", "--fn", "S", "--alpha", "1", "--x", "-0.5", "--deriv", "1"]));
    assert!((v["results"]["value"].as_f64().unwrap() - 0.5f64.cos()).abs() < 1e-14);
}

#[test]
fn zeros_at_unit_alpha_are_multiples_of_pi() {
    let v = json(&pantograph(&["zeros", "--alpha", "1", "--count", "3", "--family", "rho"]));
    let rho: Vec<f64> = v["results"]["rho"].as_array().unwrap().iter().map(|z| z.as_f64().unwrap()).collect();
    for (n, z) in rho.iter().enumerate() {
        assert!((z - (n + 1) as f64 * std::f64::consts::PI).abs() < 1e-12);
    }
}

#[test]
fn zeros_csv_has_header_and_rows() {
    let dir = std::env::temp_dir().join(format!("pantograph-zeros-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z.csv");
    json(&pantograph(&["zeros", "--alpha", "0.5", "--count", "2", "--csv", path.to_str().unwrap()]));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,index,zero,bracket_lo,bracket_hi");
    assert_eq!(lines.len(), 1 + 3 * 2);
    assert!(lines.iter().any(|l| l.starts_with("eneg,1,-1.48807854559971")));
}

#[test]
fn euler_suite_at_one_alpha() {
    let out = pantograph(&["check", "--suite", "euler", "--alpha", "0.5"]);
    let v = json(&out);
    assert_eq!(v["results"]["passed"], true);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = pantograph(&["check", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_with_two() {
    assert_eq!(pantograph(&["eval", "--fn", "Q", "--alpha", "1", "--x", "1"]).status.code(), Some(2));
    assert_eq!(pantograph(&["solve", "--alpha", "0.5", "--order", "2", "--coeffs", "1", "--init", "1,0"]).status.code(), Some(2));
    assert_eq!(pantograph(&["solve", "--alpha", "0.5", "--order", "1", "--coeffs", "1", "--init", "1", "--forcing", "1-2"]).status.code(), Some(2));
}

#[test]
fn computational_failure_reports_json_on_stderr() {
    let out = pantograph(&["eval", "--fn", "L", "--alpha", "0.5", "--x", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "OutsideValidatedDomain");
    let out = pantograph(&["eval", "--fn", "E", "--alpha", "1.5", "--x", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_round_trips_through_json() {
    let dir = std::env::temp_dir().join(format!("pantograph-solve-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let out = pantograph(&["solve", "--alpha", "0.5", "--order", "2", "--coeffs", "1,0.3", "--init", "1,0", "--forcing", "1:0.7", "--at", "0.25,1.75"]);
    std::fs::write(&path, &out.stdout).unwrap();
    let first = json(&out);
    let again = json(&pantograph(&["solve", "--from-json", path.to_str().unwrap(), "--at", "0.25,1.75"]));
    assert_eq!(first["results"]["at"], again["results"]["at"]);
    assert_eq!(first["results"]["samples"], again["results"]["samples"]);
}

#[test]
fn solve_system_and_chain() {
    let v = json(&pantograph(&["solve", "--alpha", "1", "--matrix", "0,1,-1,0", "--init", "1,0", "--at", "1"]));
    let vals = &v["results"]["at"][0]["values"];
    assert!((vals[0].as_f64().unwrap() - 1f64.cos()).abs() < 1e-12);
    assert!((vals[1].as_f64().unwrap() + 1f64.sin()).abs() < 1e-12);
    let v = json(&pantograph(&["solve", "--alpha", "0.5", "--chain", "-1", "--init", "1,1", "--samples", "3"]));
    assert_eq!(v["results"]["solution"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_at_a_zero_of_the_gate() {
    let zeros = json(&pantograph(&["zeros", "--alpha", "0.5", "--count", "1", "--family", "eneg"]));
    let z = -zeros["results"]["e_neg"][0].as_f64().unwrap();
    let x0 = format!("{z:.17}");
    let v = json(&pantograph(&["classify", "--alpha", "0.5", "--k", "-1", "--x0", &x0, "--data", "0"]));
    assert_eq!(v["results"]["classification"]["variant"], "InfiniteFamily");
    assert_eq!(v["diagnostics"]["condition_flags"][0], "AtZero");
    let v = json(&pantograph(&["classify", "--alpha", "0.5", "--k", "-1", "--x0", &x0, "--data", "1"]));
    assert_eq!(v["results"]["classification"]["variant"], "NoSolution");
    let v = json(&pantograph(&["classify", "--alpha", "0.5", "--k", "-1", "--x0", "0.8", "--data", "1"]));
    assert_eq!(v["results"]["classification"]["variant"], "Unique");
}

#[test]
fn eigen_lists_negative_eigenvalues() {
    let v = json(&pantograph(&["eigen", "--alpha", "0.9", "--count", "3", "--symmetric", "2"]));
    let pairs = v["results"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    assert!(pairs.iter().all(|p| p["lambda"].as_f64().unwrap() < 0.0));
}

#[test]
fn pde_grid_csv() {
    let out = pantograph(&["pde", "--kind", "heat", "--alpha", "1", "--beta", "1", "--phi", "basis:1", "--modes", "2", "--nx", "5", "--nt", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,t,u");
    assert_eq!(lines.len(), 1 + 15);
    // x = 0.5, t = 0.5 is row 1 * 5 + 2
    let u: f64 = lines[1 + 7].split(',').nth(2).unwrap().parse().unwrap();
    let pi = std::f64::consts::PI;
    assert!((u - (-pi * pi * 0.5f64).exp()).abs() < 1e-9);
}
