use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use imago::fixtures;
use imago::{Algebra, Model, SelectionFunction};
use serde_json::Value;

fn imago(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imago"))
        .args(args)
        .output()
        .unwrap()
}

fn imago_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imago"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_stalnaker(path: &Path) {
    let f = SelectionFunction::nearest_singleton(Arc::new(Algebra::new(3).unwrap()));
    let model = Model::new(f, fixtures::example_probability(), None);
    std::fs::write(path, model.to_json()).unwrap();
}

#[test]
fn check_stalnaker_model_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stalnaker.json");
    write_stalnaker(&path);
    let out = imago(&["check", path.to_str().unwrap(), "--targets", "prop1,thm1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["schema_version"], "imago-report/1");
    assert_eq!(report["targets"].as_array().unwrap().len(), 2);
}

#[test]
fn check_writes_report_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("example.json");
    let report = dir.path().join("report.json");
    assert!(imago(&["demo", "--out", model.to_str().unwrap()])
        .status
        .success());
    let out = imago(&[
        "check",
        model.to_str().unwrap(),
        "--targets",
        "thm1",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let witness = &report["targets"][0]["witnesses"][0];
    assert_eq!(witness["target"], "thm1-equality");
    assert_eq!(witness["model"]["schema_version"], "imago-model/1");
}

#[test]
fn check_reports_syntax_errors_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        "{\n  \"schema_version\": \"imago-model/1\",\n  \"atoms\": [\"w1\" \"w2\"]\n}",
    )
    .unwrap();
    let out = imago(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn check_rejects_unknown_targets_and_missing_files() {
    let out = imago(&["check", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stalnaker.json");
    write_stalnaker(&path);
    let out = imago(&["check", path.to_str().unwrap(), "--targets", "fact9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown target"));
}

#[test]
fn campaign_exhaustive_two_atoms_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = imago(&[
        "campaign",
        "--atoms",
        "2",
        "--mode",
        "exhaustive",
        "--targets",
        "all",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["mode"], "exhaustive");
    assert_eq!(report["targets"].as_array().unwrap().len(), 19);
}

#[test]
fn campaign_over_budget_names_the_bound() {
    let out = imago(&["campaign", "--atoms", "3", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    // 8^24 selection functions at three atoms.
    assert!(
        stderr(&out).contains("4722366482869645213696"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn budget_env_var_overrides_default() {
    let out = imago_env(
        &["campaign", "--atoms", "2", "--targets", "fact2"],
        "IMAGO_BUDGET",
        "100",
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("65536"), "{}", stderr(&out));
}

#[test]
fn campaign_sampled_normal_passes() {
    let out = imago(&[
        "campaign",
        "--atoms",
        "3",
        "--mode",
        "sampled",
        "--trials",
        "500",
        "--seed",
        "42",
        "--constraints",
        "normality",
        "--targets",
        "fact7,thm1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["trials"], 500);
    assert_eq!(report["constraints"], serde_json::json!(["normality"]));
}

#[test]
fn campaign_failure_exits_one_with_witnesses() {
    let out = imago(&[
        "campaign",
        "--atoms",
        "3",
        "--mode",
        "sampled",
        "--trials",
        "50",
        "--constraints",
        "normality",
        "--targets",
        "thm1-equality",
        "--max-witnesses",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        report["targets"][0]["witnesses"].as_array().unwrap().len(),
        2
    );
}

#[test]
fn campaign_rejects_bad_flags() {
    assert_eq!(
        imago(&["campaign", "--atoms", "2", "--mode", "fuzzy"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        imago(&["campaign", "--atoms", "2", "--constraints", "roundness"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(imago(&["campaign", "--atoms", "17"]).status.code(), Some(2));
}

#[test]
fn demo_with_lambda_weight() {
    let out = imago(&["demo", "--lambda-weight", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out)
            .lines()
            .any(|l| l == "P(a > b) = 1/4 < 3/8 = P_a^lambda(b)"),
        "{}",
        stdout(&out)
    );
    assert_eq!(
        imago(&["demo", "--lambda-weight", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn demo_with_unique_cell_attains_equality() {
    let out = imago(&["demo", "--lewis"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("f(a, .): w1 -> {w2}, w2 -> {w2}, w3 -> {w3}"),
        "{text}"
    );
    assert!(
        text.lines()
            .any(|l| l == "equality holds for every consequent at a"),
        "{text}"
    );
}

#[test]
fn mine_emits_verified_counterexample() {
    let out = imago(&["mine", "--atoms", "3", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let cx: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!cx["antecedent"].as_array().unwrap().is_empty());
    assert_ne!(cx["conditional_probability"], cx["updated_probability"]);
    let file: imago::model::ModelFile = serde_json::from_value(cx["model"].clone()).unwrap();
    let model = Model::from_file(&file).unwrap();
    assert!(model.selection.is_normal() && !model.selection.is_unique_on_nonempty());
    assert_eq!(imago(&["mine", "--atoms", "1"]).status.code(), Some(1));
}
