use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn twoloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoloop")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn circle_pair(tau: f64) -> String {
    let r = (-2.0 * PI * tau).exp();
    format!(r#"{{"gamma1": {{"coeffs": [[0,0],[0,0],[{r:e},0]], "degree": 1}}, "gamma2": {{"coeffs": [[0,0],[0,0],[1,0]], "degree": 1}}}}"#)
}

const PERTURBED: &str = r#"{"gamma1": {"coeffs": [[0,0],[0,0],[0.0432139182637723,0]], "degree": 1},
 "gamma2": {"coeffs": [[0,0],[0,0],[0.025,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0.025,0]], "degree": 4}}"#;

fn json_of(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(o: &Output) -> (String, Vec<Vec<f64>>) {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn uniformize_echoes_circle_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &circle_pair(0.5));
    let v = json_of(&twoloop(&["uniformize", cfg.to_str().unwrap()]));
    assert!((v["tau"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(v["boundary_residual"].as_f64().unwrap(), 0.0);
}

#[test]
fn uniformize_perturbed_reports_small_residual() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PERTURBED);
    let v = json_of(&twoloop(&["uniformize", cfg.to_str().unwrap(), "--tol", "1e-10"]));
    assert!(v["boundary_residual"].as_f64().unwrap() < 1e-10);
    assert!(v["diagnostics"]["nested"].as_bool().unwrap());
}

#[test]
fn malformed_input_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    let o = twoloop(&["uniformize", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parsing"));

    let crossing = r#"{"gamma1": {"coeffs": [[0,0],[0,0],[2,0]], "degree": 1}, "gamma2": {"coeffs": [[0,0],[0,0],[1,0]], "degree": 1}}"#;
    let p = write(dir.path(), "x.json", crossing);
    assert_eq!(twoloop(&["potential", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(twoloop(&["scan-tau", "--range", "2:1"]).status.code(), Some(2));
}

#[test]
fn unreachable_tolerance_exits_with_nonconvergence_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PERTURBED);
    let o = twoloop(&["uniformize", cfg.to_str().unwrap(), "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn overflowing_criterion_exits_with_nonfinite_code() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.json", r#"{"kind":"characters","c":1e308,"weights":[[0,1]]}"#);
    let o = twoloop(&["scan-tau", "--mode", "criterion", "--trivialization", t.to_str().unwrap(), "--range", "1:10"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn circle_scan_is_normalized_and_decreasing() {
    let (header, rows) = csv_rows(&twoloop(&["scan-tau", "--range", "0.05:5", "--grid", "100"]));
    assert_eq!(header, "tau,lpot_relative");
    let one = rows.iter().find(|r| r[0] == 1.0).expect("τ = 1 on the grid");
    assert_eq!(one[1], 0.0);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
}

#[test]
fn csv_has_seventeen_significant_digits() {
    let o = twoloop(&["scan-tau", "--range", "0.5:2", "--grid", "3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let cell = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let mantissa = cell.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{cell}");
}

#[test]
fn criterion_scan_has_interior_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.json", r#"{"kind":"characters","c":0.3,"weights":[[0.0,1]]}"#);
    let (header, rows) = csv_rows(&twoloop(&[
        "scan-tau", "--mode", "criterion", "--trivialization", t.to_str().unwrap(), "--range", "0.05:20", "--grid", "200",
    ]));
    assert_eq!(header, "q,log_g");
    let i = (0..rows.len()).min_by(|&a, &b| rows[a][1].total_cmp(&rows[b][1])).unwrap();
    assert!(i > 0 && i < rows.len() - 1);
    let v = json_of(&twoloop(&["criterion", t.to_str().unwrap()]));
    assert_eq!(v["classification"], "interior-minimum");
    let q_star = (-PI / v["tau_star"].as_f64().unwrap()).exp();
    assert!(rows[i - 1][0] <= q_star && q_star <= rows[i + 1][0]);
}

#[test]
fn potential_on_circle_pair() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &circle_pair(0.8));
    let v = json_of(&twoloop(&["potential", cfg.to_str().unwrap(), "--route", "both", "--moebius-trials", "2", "--seed", "3"]));
    assert_eq!(v["route_difference"].as_f64().unwrap(), 0.0);
    for m in v["moebius"].as_array().unwrap() {
        assert!(m["deviation"].as_f64().unwrap().abs() < 1e-4);
    }
}

#[test]
fn potential_on_perturbed_pair_reports_grunsky_gap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PERTURBED);
    let v = json_of(&twoloop(&["potential", cfg.to_str().unwrap()]));
    assert!(v["grunsky_gap"].as_f64().unwrap().abs() < 1e-6);
    assert!(v["breakdown"]["IA"].as_f64().unwrap() > 0.0);
    let lk = json_of(&twoloop(&["potential", cfg.to_str().unwrap(), "--route", "lk"]));
    assert!(lk.get("breakdown").is_none());
    assert!((lk["lk_total"].as_f64().unwrap() - v["breakdown"]["total"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn grunsky_and_variation_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PERTURBED);
    let g = json_of(&twoloop(&["grunsky", cfg.to_str().unwrap(), "--degree", "16"]));
    assert_eq!(g["b_plus"].as_array().unwrap().len(), 16);
    assert!(g["gap"].as_f64().unwrap().abs() < 1e-6);
    let v = json_of(&twoloop(&["variation-check", cfg.to_str().unwrap(), "--center", "1.6,0.3", "--eps", "1e-3"]));
    assert!(v["rel_err"].as_f64().unwrap() < 0.05);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", PERTURBED);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = twoloop(&["potential", cfg.to_str().unwrap(), "--moebius-trials", "1", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
