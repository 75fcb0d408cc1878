//! Acceptance suite, CLI side.
//!
//!   8. Determinism: identical run configurations produce byte-identical
//!      JSON, including under different thread counts.
//!   9. End-to-end: rank and compare complete on a 5000-row CSV and emit
//!      schema-valid reports in under 60 s.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use ce_core::dataio::{write_csv, CsvSchema, MissingPolicy};
use ce_core::synthetic;
use serde_json::Value;

fn cesel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cesel"))
}

fn fixture_csv(dir: &Path, n: usize, seed: u64) -> (PathBuf, String) {
    let ds = synthetic::informative_noise_dataset(n, 3, 5, 4, 3, seed);
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

#[test]
fn acceptance_8_compare_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 240, 88);

    // identical config means identical flags, including --out-dir; each run
    // overwrites the same report and the bytes are captured in between.
    // jitter on so the randomized step is exercised; the seed pins it.
    let out_dir = dir.path().join("out");
    let run = |threads: &str| {
        let output = cesel()
            .env("RAYON_NUM_THREADS", threads)
            .args(["compare", "--input"])
            .arg(&csv)
            .args([
                "--features",
                &features,
                "--top-k",
                "3",
                "--jitter-label",
                "--seed",
                "42",
                "--seeds",
                "1,2,3",
                "--out-dir",
            ])
            .arg(&out_dir)
            .output()
            .unwrap();
        assert!(
            output.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        std::fs::read(out_dir.join("compare.json")).unwrap()
    };

    let first = run("1");
    let second = run("1");
    let third = run("4");
    assert_eq!(first, second, "reruns differ");
    assert_eq!(first, third, "thread count changed the report bytes");
    println!(
        "acceptance 8 (determinism): PASS — {} byte compare.json identical across reruns and thread counts",
        first.len()
    );
}

#[test]
fn acceptance_9_end_to_end_5000_rows_under_60s() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, features) = fixture_csv(dir.path(), 5000, 99);
    let start = Instant::now();

    let rank_out = cesel()
        .args(["rank", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        rank_out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&rank_out.stderr)
    );

    let compare_out = cesel()
        .args(["compare", "--input"])
        .arg(&csv)
        .args(["--features", &features, "--top-k", "3", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        compare_out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&compare_out.stderr)
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "rank + compare took {elapsed:?}, budget is 60 s"
    );

    // schema checks on both reports
    let ranking: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ranking.json")).unwrap())
            .unwrap();
    let entries = ranking["ranking"].as_array().unwrap();
    assert_eq!(entries.len(), 8);
    for entry in entries {
        assert!(entry["name"].is_string());
        assert!(entry["ce"].is_f64());
        assert_eq!(entry["k"], 3);
    }
    for key in [
        "command", "input", "well_col", "depth_col", "label_col", "features", "missing",
        "missing_token", "adjacency", "k_ce", "jitter_label", "top_k", "threshold", "knn",
        "weighting", "seed", "seeds", "out_dir",
    ] {
        assert!(
            ranking["config"].get(key).is_some(),
            "config is missing {key}"
        );
    }
    assert!(std::fs::read_to_string(dir.path().join("ranking.csv"))
        .unwrap()
        .starts_with("name,ce\n"));

    let compare: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("compare.json")).unwrap())
            .unwrap();
    assert_eq!(compare["selected"].as_array().unwrap().len(), 3);
    assert!(compare["accuracy_delta"].is_f64());
    for report in ["all_features", "selected_features"] {
        let m = &compare[report];
        assert!(m["accuracy"].as_f64().unwrap() >= 0.0);
        assert!(m["macro_f1"].as_f64().unwrap() >= 0.0);
        assert!(m["confusion"].is_array());
        assert_eq!(m["fold_breakdown"].as_array().unwrap().len(), 4);
    }

    println!("acceptance 9 (end-to-end 5000 rows): PASS — rank + compare in {elapsed:?}");
}
