//! End-to-end tests of the `congauss` binary: exit codes, file outputs,
//! determinism, and config precedence.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_congauss"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| line.split(',').map(|f| f.parse().unwrap()).collect())
        .collect()
}

#[test]
fn sample_ridge_writes_zero_sum_rows_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["sample", "--family", "ridge", "--K", "4", "--n", "1000", "--seed", "7", "--out", "s.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = read_rows(&dir.path().join("s.csv"));
    assert_eq!(rows.len(), 1000);
    assert!(rows.iter().all(|r| r.len() == 4));
    for row in &rows {
        let s: f64 = row.iter().sum();
        assert!(s.abs() <= 1e-9, "row sums to {s}");
    }

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["stream"], 0);
    assert_eq!(meta["family"], "ridge");
    assert_eq!(meta["compensate"], true);
}

#[test]
fn sample_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--family", "horseshoe", "--K", "3", "--n", "200", "--seed", "11", "--out", "a.csv"];
    assert!(run(&args, dir.path()).status.success());
    let first = std::fs::read(dir.path().join("a.csv")).unwrap();

    let args2 = ["sample", "--family", "horseshoe", "--K", "3", "--n", "200", "--seed", "11", "--out", "b.csv"];
    assert!(run(&args2, dir.path()).status.success());
    let second = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(first, second);

    // a different stream must differ
    let args3 = ["sample", "--family", "horseshoe", "--K", "3", "--n", "200", "--seed", "11", "--stream", "1", "--out", "c.csv"];
    assert!(run(&args3, dir.path()).status.success());
    let third = std::fs::read(dir.path().join("c.csv")).unwrap();
    assert_ne!(first, third);
}

#[test]
fn sample_constraint_mode_satisfies_system() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("A.csv"), "1,1,1,1\n1,-1,0,2\n").unwrap();
    std::fs::write(dir.path().join("b.csv"), "0.5\n-1\n").unwrap();
    std::fs::write(dir.path().join("D.csv"), "0.5,2,1,4\n").unwrap();

    let out = run(
        &[
            "sample", "--constraint", "A.csv", "--b", "b.csv", "--D", "D.csv",
            "--n", "100", "--seed", "1", "--out", "s.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let a = [[1.0, 1.0, 1.0, 1.0], [1.0, -1.0, 0.0, 2.0]];
    let b = [0.5, -1.0];
    for row in read_rows(&dir.path().join("s.csv")) {
        for (ai, bi) in a.iter().zip(b) {
            let dot: f64 = ai.iter().zip(&row).map(|(x, y)| x * y).sum();
            assert!((dot - bi).abs() <= 1e-9 * 2.0, "residual {}", (dot - bi).abs());
        }
    }
}

#[test]
fn sample_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["sample", "--family", "ridge", "--K", "3", "--n", "10", "--seed", "2", "--format", "json", "--out", "s.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    let samples = body["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 10);
    assert_eq!(samples[0].as_array().unwrap().len(), 3);
}

#[test]
fn check_family_passes_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["check", "--family", "ridge", "--K", "2", "--n", "20000", "--seed", "3", "--out", "report.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["seed"], 3);
    assert_eq!(report["n_samples"], 20000);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 6);
    for check in checks {
        assert_eq!(check["status"], "pass", "{check}");
        assert!(check["statistic"].is_number());
        assert!(check["threshold"].is_number());
    }
}

#[test]
fn check_constraint_mode_passes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("A.csv"), "1,2,-1\n").unwrap();
    let out = run(
        &["check", "--constraint", "A.csv", "--n", "20000", "--seed", "5", "--out", "report.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert!(report["family_or_system"].as_str().unwrap().contains("system"));
}

#[test]
fn check_rank_deficient_constraint_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("A.csv"), "1,1,1\n2,2,2\n").unwrap();
    let out = run(
        &["check", "--constraint", "A.csv", "--n", "100", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("rank deficient"), "stderr: {stderr}");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // family and constraint together
    std::fs::write(dir.path().join("A.csv"), "1,1\n").unwrap();
    let out = run(
        &["sample", "--family", "ridge", "--constraint", "A.csv", "--K", "2", "--out", "s.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // unknown family
    let out = run(&["sample", "--family", "lasso", "--K", "2", "--out", "s.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lasso"));

    // missing --out
    let out = run(&["sample", "--family", "ridge", "--K", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--out"));

    // invalid K for rhs p0
    let out = run(
        &["sample", "--family", "rhs", "--K", "3", "--p0", "5", "--out", "s.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_synthetic_recovers_effects() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "demo", "--K", "3", "--effects", "1,2,-3", "--noise", "0.1",
            "--n-obs", "300", "--seed", "5", "--out", "demo.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("demo.json")).unwrap())
            .unwrap();
    assert!(report["max_recovery_error"].as_f64().unwrap() <= 0.1);
    assert!(report["max_draw_constraint_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(report["true_effects"].as_array().unwrap().len(), 3);
}

#[test]
fn demo_null_model_is_covered_by_posterior_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "demo", "--K", "4", "--effects", "0,0,0,0", "--noise", "0.1",
            "--n-obs", "200", "--seed", "21", "--out", "demo.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("demo.json")).unwrap())
            .unwrap();
    let mean = report["posterior_mean"].as_array().unwrap();
    let sd = report["posterior_sd"].as_array().unwrap();
    for (m, s) in mean.iter().zip(sd) {
        let m = m.as_f64().unwrap();
        let s = s.as_f64().unwrap();
        assert!(m.abs() <= 3.0 * s, "posterior mean {m} exceeds 3 posterior sd {s}");
    }
}

#[test]
fn demo_rejects_non_zero_sum_effects() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["demo", "--K", "3", "--effects", "1,2,3", "--out", "demo.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum to zero"));
}

#[test]
fn config_file_applies_under_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"family": "ridge", "K": 4, "n": 50, "seed": 1}"#,
    )
    .unwrap();

    // flags override config: seed 9 wins, everything else from the file
    let out = run(
        &["sample", "--config", "cfg.json", "--seed", "9", "--out", "s.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["seed"], 9);
    assert_eq!(meta["k"], 4);
    assert_eq!(meta["n"], 50);
    assert_eq!(meta["family"], "ridge");

    let rows = read_rows(&dir.path().join("s.csv"));
    assert_eq!(rows.len(), 50);

    // unknown config keys are rejected
    std::fs::write(dir.path().join("bad.json"), r#"{"sead": 1}"#).unwrap();
    let out = run(
        &["sample", "--config", "bad.json", "--family", "ridge", "--K", "2", "--out", "s.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}
