#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use ordinal_seasonality::synthetic::{series_from_distribution, series_from_subperiods};

#[path = "../../../core/tests/common/mod.rs"]
pub mod reference;

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ordinal-seasonality"));
    c.env_remove("ORDINAL_SEASONALITY_LOG");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn timed(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = run(args);
    (out, start.elapsed())
}

pub fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

pub fn write_returns(path: &Path, values: &[f64]) {
    let mut w = csv::Writer::from_path(path).unwrap();
    w.write_record(["return"]).unwrap();
    for v in values {
        w.write_record([format!("{v:e}")]).unwrap();
    }
    w.flush().unwrap();
}

/// 13,550 returns whose subperiod pattern counts equal the NYSE fixture.
pub fn nyse_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("nyse.csv");
    let xs = series_from_subperiods(&reference::subperiod_distributions(), 1966).unwrap();
    write_returns(&path, &xs);
    path
}

/// Returns realizing the shuffled-data position matrix.
pub fn shuffled_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("nyse_shuffled.csv");
    let xs = series_from_distribution(&reference::shuffled_distribution(), 2017).unwrap();
    write_returns(&path, &xs);
    path
}

pub fn f(v: &serde_json::Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}
