//! End-to-end CLI behavior: happy paths, error paths, and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ce_core::dataio::{write_csv, CsvSchema, MissingPolicy};
use ce_core::synthetic;
use serde_json::Value;

fn cesel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cesel"))
}

/// Writes the informative-vs-noise fixture as CSV, returning the path and the
/// comma-joined feature list.
fn fixture_csv(
    dir: &Path,
    n: usize,
    informative: usize,
    noise: usize,
    seed: u64,
) -> (PathBuf, String) {
    let ds = synthetic::informative_noise_dataset(n, informative, noise, 4, 3, seed);
    let schema = CsvSchema {
        well_col: "well".into(),
        depth_col: "depth".into(),
        label_col: "facies".into(),
        feature_cols: ds.feature_names().to_vec(),
        missing_policy: MissingPolicy::DropRow,
        missing_sentinel: None,
    };
    let path = dir.join("fixture.csv");
    write_csv(&ds, &path, &schema).unwrap();
    (path, ds.feature_names().join(","))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn rank_puts_informative_variables_on_top() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 600, 3, 5, 11);
    let output = cesel()
        .args(["rank", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));

    let report = read_json(&dir.path().join("ranking.json"));
    let ranking = report["ranking"].as_array().unwrap();
    assert_eq!(ranking.len(), 8);
    for entry in &ranking[..3] {
        let name = entry["name"].as_str().unwrap();
        assert!(name.starts_with("inf_"), "unexpected top variable {name}");
    }
    assert_eq!(report["config"]["command"], "rank");
    assert_eq!(report["config"]["k_ce"], 3);

    let csv_text = std::fs::read_to_string(dir.path().join("ranking.csv")).unwrap();
    let mut lines = csv_text.lines();
    assert_eq!(lines.next(), Some("name,ce"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn rank_single_feature_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 100, 1, 0, 3);
    let output = cesel()
        .args(["rank", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let report = read_json(&dir.path().join("ranking.json"));
    assert_eq!(report["ranking"].as_array().unwrap().len(), 1);
}

#[test]
fn missing_label_column_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 100, 1, 1, 3);
    let output = cesel()
        .args(["rank", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--label-col", "lithology", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("lithology"),
        "stderr does not name the column: {}",
        stderr_of(&output)
    );
}

#[test]
fn unreadable_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = cesel()
        .args(["rank", "--input"])
        .arg(dir.path().join("no_such.csv"))
        .args(["--features", "a,b", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn select_with_vacuous_threshold_reports_empty_selection() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 200, 2, 2, 7);
    let output = cesel()
        .args(["select", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--threshold", "-10", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let report = read_json(&dir.path().join("selection.json"));
    assert_eq!(report["selected"].as_array().unwrap().len(), 0);
    assert_eq!(report["config"]["threshold"], -10.0);
}

#[test]
fn select_top_k_exceeding_variables_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 200, 2, 2, 7);
    let output = cesel()
        .args(["select", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--top-k", "9", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn compare_with_empty_selection_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 200, 2, 2, 7);
    let output = cesel()
        .args(["compare", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--threshold", "-10", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(
        stderr_of(&output).contains("empty selection"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn compare_selecting_all_variables_has_delta_exactly_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 300, 2, 2, 19);
    let output = cesel()
        .args(["compare", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--top-k", "4", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let report = read_json(&dir.path().join("compare.json"));
    assert_eq!(report["accuracy_delta"], 0.0);
    assert_eq!(report["all_features"], report["selected_features"]);
    assert_eq!(report["selected"].as_array().unwrap().len(), 4);
}

#[test]
fn evaluate_reports_adjacent_accuracy_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 300, 2, 1, 13);
    let sidecar = dir.path().join("classes.json");
    std::fs::write(
        &sidecar,
        r#"{"class_names": {"1": "sand", "2": "silt", "3": "shale"},
            "adjacency": {"1": [2], "2": [3]}}"#,
    )
    .unwrap();
    let output = cesel()
        .args(["evaluate", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--adjacency"])
        .arg(&sidecar)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let report = read_json(&dir.path().join("evaluate.json"));
    let metrics = &report["report"];
    let accuracy = metrics["accuracy"].as_f64().unwrap();
    let adjacent = metrics["adjacent_accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&accuracy));
    assert!(adjacent >= accuracy);
    assert_eq!(metrics["fold_breakdown"].as_array().unwrap().len(), 4);
}

#[test]
fn evaluate_without_sidecar_omits_adjacent_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 200, 1, 1, 29);
    let output = cesel()
        .args(["evaluate", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let report = read_json(&dir.path().join("evaluate.json"));
    assert!(report["report"].get("adjacent_accuracy").is_none());
}

#[test]
fn rule_flags_are_required_and_exclusive_on_compare() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 100, 1, 1, 3);
    // neither rule flag
    let output = cesel()
        .args(["compare", "--input"])
        .arg(&csv)
        .args(["--features", &features])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    // both rule flags
    let output = cesel()
        .args(["compare", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--top-k", "1", "--threshold", "-0.1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
