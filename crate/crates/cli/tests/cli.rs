use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrc")).args(args).output().expect("spawn qrc")
}

fn ok(args: &[&str]) -> String {
    let out = qrc(args);
    assert!(out.status.success(), "qrc {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_train_predict_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("lorenz.csv");
    let model = dir.path().join("model.json");
    let pred = dir.path().join("pred.csv");
    ok(&["generate", "--system", "lorenz63", "--steps", "1500", "--out", path(&data)]);
    let text = fs::read_to_string(&data).unwrap();
    assert_eq!(text.lines().count(), 1501);
    assert!(text.starts_with("t,x,y,z\n"));

    ok(&["train", "--data", path(&data), "--n_sync", "50", "--n_train", "800", "--out", path(&model)]);
    let saved: Value = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert!(saved.get("model").is_some() && saved.get("bank").is_some());

    ok(&["predict", "--model", path(&model), "--steps", "200", "--out", path(&pred)]);
    assert_eq!(fs::read_to_string(&pred).unwrap().lines().count(), 201);

    // The forecast continues right after the 850 points used for training.
    let truth = dir.path().join("truth.csv");
    let body: Vec<&str> = text.lines().collect();
    let mut rows = vec![body[0]];
    rows.extend(&body[851..1051]);
    fs::write(&truth, rows.join("\n") + "\n").unwrap();
    let report: Value =
        serde_json::from_str(&ok(&["evaluate", "--pred", path(&pred), "--truth", path(&truth)])).unwrap();
    let h = report["forecast_horizon"].as_f64().unwrap();
    assert!(h > 1.0, "horizon {h}");
}

#[test]
fn run_writes_all_outputs_and_report_regenerates_them() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let stdout = ok(&["run", "--n_stat", "2", "--n_pred", "300", "--n_train", "600", "--out", path(&out)]);
    assert!(stdout.contains("2 realizations"));
    for f in [
        "manifest.json",
        "reports.csv",
        "summary.json",
        "failures.json",
        "outcome.json",
        "horizon_box.svg",
        "climate_scatter.svg",
    ] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["n_stat"], 2);
    assert_eq!(fs::read_to_string(out.join("failures.json")).unwrap().trim(), "[]");

    let again = dir.path().join("again");
    ok(&["report", "--input", path(&out.join("outcome.json")), "--out", path(&again)]);
    assert_eq!(fs::read(out.join("reports.csv")).unwrap(), fs::read(again.join("reports.csv")).unwrap());
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"beta": 0.001, "n_stat": 7}"#).unwrap();
    let out = dir.path().join("run");
    ok(&["run", "--config", path(&cfg), "--n_stat", "1", "--n_pred", "100", "--n_train", "500", "--out", path(&out)]);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["beta"], 0.001);
    assert_eq!(manifest["config"]["n_stat"], 1);
    assert_eq!(manifest["config"]["V"], 9);
}

#[test]
fn out_of_space_is_rejected_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let bad = qrc(&["run", "--a", "0.3", "--b", "0.6", "--out", path(&out)]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("search space"));
    ok(&[
        "run",
        "--a",
        "0.3",
        "--b",
        "0.6",
        "--V",
        "2",
        "--r",
        "1",
        "--G",
        "2",
        "--n_stat",
        "1",
        "--n_pred",
        "50",
        "--n_train",
        "300",
        "--allow_out_of_space",
        "--out",
        path(&out),
    ]);
}

#[test]
fn noise_sweep_requires_single_round() {
    let dir = tempfile::tempdir().unwrap();
    let bad = qrc(&["noise-sweep", "--r", "3", "--out", path(dir.path())]);
    assert!(!bad.status.success());
    let out = dir.path().join("ns");
    ok(&[
        "noise-sweep",
        "--V",
        "2",
        "--r",
        "1",
        "--G",
        "2",
        "--n_stat",
        "1",
        "--n_pred",
        "50",
        "--n_train",
        "300",
        "--gammas",
        "0,0.01",
        "--out",
        path(&out),
    ]);
    let csv = fs::read_to_string(out.join("noise.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}
