mod common;

use std::path::Path;

use common::{iegrowth, read_report, synthetic_config};
use iegrowth::oracle::EconomySpec;

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn exponential_csv(lambda: f64) -> String {
    let mut s = String::from("year,value\n");
    for t in 0..10 {
        s.push_str(&format!("{},{}\n", 2000 + t, 100.0 * (lambda * t as f64).exp()));
    }
    s
}

#[test]
fn version_prints_name() {
    let o = iegrowth(["version"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("iegrowth "));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(iegrowth(["frobnicate"]).status.code(), Some(1));
    assert_eq!(iegrowth(["fit", "x.csv"]).status.code(), Some(1));
    assert_eq!(iegrowth(["--help"]).status.code(), Some(0));
}

#[test]
fn transform_is_zero_at_base() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.csv", "year,value\n2000,50\n2001,100\n2002,200\n");
    let o = iegrowth(["transform".as_ref(), f.as_os_str()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "year,ie");
    assert_eq!(lines[1], "2000,0");
    assert_eq!(lines[2], format!("2001,{}", iegrowth::report::fmt_num(2f64.ln())));
}

#[test]
fn percent_change_input_is_cumulated() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g.csv", "year,pct\n2001,10\n2002,10\n");
    let o = iegrowth([
        "transform".as_ref(),
        f.as_os_str(),
        "--unit".as_ref(),
        "percent_change_per_annum".as_ref(),
        "--base-year".as_ref(),
        "2000".as_ref(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("2000,0\n"));
    assert!(out.contains(&format!("2002,{}", iegrowth::report::fmt_num(2.0 * 1.1f64.ln()))));
}

#[test]
fn fit_reports_rate() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.csv", &exponential_csv(0.021));
    let o = iegrowth(["fit".as_ref(), f.as_os_str(), "--from".as_ref(), "2000".as_ref(), "--to".as_ref(), "2009".as_ref()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["lambda"].as_f64().unwrap() - 0.021).abs() < 1e-10);
    assert_eq!(v["n"], 10);
    assert_eq!(v["annual_rate_pct"], "2.12%");
}

#[test]
fn elasticity_reports_slope() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.csv", &exponential_csv(0.02));
    let y = write(dir.path(), "y.csv", &exponential_csv(0.03));
    let o = iegrowth([
        "elasticity".as_ref(),
        y.as_os_str(),
        x.as_os_str(),
        "--from".as_ref(),
        "2000".as_ref(),
        "--to".as_ref(),
        "2009".as_ref(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["slope"].as_f64().unwrap() - 1.5).abs() < 1e-10);
    assert_eq!(v["years"].as_array().unwrap().len(), 10);
}

#[test]
fn parse_error_exits_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.csv", "year,value\n2000,1\n2001,oops\n");
    let o = iegrowth(["transform".as_ref(), f.as_os_str()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_two() {
    let o = iegrowth(["transform", "/nonexistent/file.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn short_window_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.csv", &exponential_csv(0.02));
    let o = iegrowth(["fit".as_ref(), f.as_os_str(), "--from".as_ref(), "2008".as_ref(), "--to".as_ref(), "2012".as_ref()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn bad_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.toml", "base_year = 2000\nbogus = 1\n");
    let o = iegrowth(["analyze".as_ref(), f.as_os_str()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("config"), "{}", stderr(&o));
}

#[test]
fn analyze_writes_report_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synthetic_config(dir.path(), &EconomySpec::noiseless(0.65, 1.24));
    let out = dir.path().join("run");
    let o = iegrowth(["analyze".as_ref(), cfg.as_os_str(), "--out".as_ref(), out.as_os_str()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("prediction accuracy 100.00%"));
    let r = read_report(&out);
    assert_eq!(r["growth"].as_array().unwrap().len(), 7);
    assert_eq!(r["elasticities"].as_array().unwrap().len(), 6);
    assert_eq!(r["chains"].as_array().unwrap().len(), 2);
    assert_eq!(r["prediction"]["years"].as_array().unwrap().len(), 20);
    assert_eq!(r["settings"]["fit_phases"], serde_json::json!(["P1", "P3"]));
    assert!(out.join("fig10_2.csv").exists());
}

#[test]
fn analyze_gap_names_stage_and_role() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synthetic_config(dir.path(), &EconomySpec::noiseless(0.65, 1.24));
    let inv = dir.path().join("data/investment.csv");
    let text: String = std::fs::read_to_string(&inv)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("2011,"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&inv, text).unwrap();
    let o = iegrowth(["analyze".as_ref(), cfg.as_os_str(), "--out".as_ref(), dir.path().join("o").as_os_str()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("ingest") && err.contains("investment") && err.contains("2011"), "{err}");
}
