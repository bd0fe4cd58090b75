#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use iegrowth::ingest::Role;
use iegrowth::oracle::{gen_chained_economy, write_dataset, EconomySpec};

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn iegrowth<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_iegrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Writes a synthetic seven-series dataset plus a config that reads it, and
/// returns the config path. The generator emits GDP and productivity as
/// levels, so their default percent-change units are overridden.
pub fn synthetic_config(dir: &Path, spec: &EconomySpec) -> PathBuf {
    write_dataset(&gen_chained_economy(spec), &dir.join("data")).unwrap();
    let mut text = String::from(
        "data_dir = \"data\"\noutput_dir = \"out\"\nbase_year = 2000\nrange = [2000, 2019]\n\
         analyses = [\"growth\", \"elasticity\", \"chain\"]\nfit_phases = [\"P1\", \"P3\"]\n",
    );
    for (label, start, end) in [("P1", 2000, 2007), ("P2", 2008, 2013), ("P3", 2014, 2019)] {
        text.push_str(&format!("\n[[phases]]\nlabel = \"{label}\"\nstart = {start}\nend = {end}\n"));
    }
    for role in Role::ALL {
        text.push_str(&format!(
            "\n[[series]]\nid = \"syn-{role}\"\nrole = \"{role}\"\npath = \"{role}.csv\"\nformat = \"generic_year_value\"\n"
        ));
        match role {
            Role::Gdp => text.push_str("unit = \"currency_level\"\n"),
            Role::Productivity => text.push_str("unit = \"index\"\n"),
            _ => {}
        }
    }
    let path = dir.join("synthetic.toml");
    std::fs::write(&path, text).unwrap();
    path
}

pub fn read_report(out_dir: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(out_dir.join("report.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn growth_rate(report: &serde_json::Value, role: &str, window: &str) -> Option<f64> {
    report["growth"]
        .as_array()?
        .iter()
        .find(|g| g["role"] == role)?["fits"]
        .as_array()?
        .iter()
        .find(|f| f["window"] == window)?["annual_rate"]
        .as_f64()
}

pub fn elasticity(report: &serde_json::Value, response: &str, predictor: &str, phase: &str) -> Option<f64> {
    report["elasticities"]
        .as_array()?
        .iter()
        .find(|e| e["response"] == response && e["predictor"] == predictor && e["phase"] == phase)?["slope"]
        .as_f64()
}
