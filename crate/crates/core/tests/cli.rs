use std::path::Path;
use std::process::{Command, Output};

use wp_curvature::report::Report;
use wp_curvature::tensor::TensorCache;
use wp_curvature::wedge::OperatorMatrix;

fn wp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wp")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn verify_n3_writes_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = wp(dir.path(), &["verify", "--n", "3", "--tensor", "t.jsonl", "--report", "r.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = Report::load(&dir.path().join("r.json")).unwrap();
    assert!(report.passed());
    assert_eq!(report.verdicts.kernel_dim, 6);
    assert_eq!(report.verdicts.nonpositive.to_string(), "pass");
    assert_eq!(report.verdicts.bound.to_string(), "pass");
    assert_eq!(report.config.n, 3);
    let cache = TensorCache::load(dir.path().join("t.jsonl")).unwrap();
    assert_eq!(report.tensor_hash, cache.content_hash().unwrap());
}

#[test]
fn verify_is_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--n", "2", "--i-max", "2", "--tensor", "t.jsonl", "--report", "r.json"];
    assert!(wp(dir.path(), &args).status.success());
    let first = std::fs::read(dir.path().join("r.json")).unwrap();
    assert!(wp(dir.path(), &args).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("r.json")).unwrap());
}

#[test]
fn tensor_zero_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = wp(dir.path(), &["tensor", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn tensor_writes_default_cache_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = wp(dir.path(), &["tensor", "--n", "3", "--jobs", "2"]);
    assert!(out.status.success());
    let cache = TensorCache::load(dir.path().join("tensor-N3.jsonl")).unwrap();
    assert_eq!(stdout_json(&out)["entries"], cache.len());
    let again = wp(dir.path(), &["tensor", "--n", "3"]);
    assert_eq!(stdout_json(&again)["new_solves"], 0);
}

#[test]
fn operator_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = wp(dir.path(), &["operator", "--n", "2", "--out", "op.csv"]);
    assert!(out.status.success());
    let m = OperatorMatrix::load(&dir.path().join("op.csv")).unwrap();
    assert_eq!(m.dimension(), 6);
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("op.csv.json")).unwrap()).unwrap();
    assert_eq!(side["basis"].as_array().unwrap().len(), 6);
    assert!(side["tensor_hash"].is_string());
}

#[test]
fn oracle_beta_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = wp(dir.path(), &["oracle", "--suite", "beta"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["details"]["checked"], 1000);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "n = 4\ni_max = 1\n[resolvent]\nroute = \"exact\"\n").unwrap();
    let out = wp(dir.path(), &["spectra", "--config", "run.toml", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 2);
    std::fs::write(dir.path().join("bad.toml"), "n = \"three\"\n").unwrap();
    assert_eq!(wp(dir.path(), &["spectra", "--config", "bad.toml"]).status.code(), Some(2));
}

#[test]
fn export_plots_from_report() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wp(dir.path(), &["verify", "--n", "3", "--i-max", "2", "--report", "r.json"]).status.success());
    let out = wp(dir.path(), &["export-plots", "--report", "r.json", "--out", "plots"]);
    assert!(out.status.success());
    let eig = std::fs::read_to_string(dir.path().join("plots/eigenvalues.csv")).unwrap();
    assert_eq!(eig.lines().count(), 16);
    std::fs::write(dir.path().join("empty.json"), "{}").unwrap();
    assert_eq!(wp(dir.path(), &["export-plots", "--report", "empty.json"]).status.code(), Some(2));
}

#[test]
fn noncompact_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let out = wp(dir.path(), &["noncompact", "--i-max", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["vectors"].as_array().unwrap().len(), 4);
}
