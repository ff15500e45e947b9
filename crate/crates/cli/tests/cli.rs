//! Command-line contract tests: exit codes, usage diagnostics, and output
//! layout.

use std::path::PathBuf;
use std::process::Command;

fn svito() -> Command {
    Command::new(env!("CARGO_BIN_EXE_svito"))
}

fn temp_out(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("svito-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = svito().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn missing_required_argument_is_usage_error() {
    let out = svito().args(["isometry"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn help_is_not_an_error() {
    let out = svito().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_set_literal_is_usage_error() {
    let out = svito()
        .args(["isometry", "--set", "[1,0]", "--paths", "10", "--steps", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("usage error"), "{err}");
}

#[test]
fn bad_thread_override_is_usage_error() {
    let out = svito()
        .env("SVITO_THREADS", "many")
        .args(["algebra-check", "--trials", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn zero_tolerance_config_is_usage_error_with_no_partial_output() {
    let dir = temp_out("tolzero");
    let cfg = dir.join("problem.json");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        &cfg,
        r#"{
            "schema_version": 1, "seed": 1, "horizon": 1.0,
            "steps": 8, "paths": 50, "tol": 0.0,
            "terminal": {"deterministic": {"lo": 0.0, "hi": 1.0}},
            "driver": "zero"
        }"#,
    )
    .unwrap();
    let outdir = dir.join("runs");
    let out = svito()
        .args(["bsde-solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("tol"), "{err}");
    // Validation precedes any artifact creation.
    assert!(!outdir.exists());
}

#[test]
fn malformed_config_reports_position() {
    let dir = temp_out("badjson");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("problem.json");
    std::fs::write(&cfg, "{\"schema_version\": 1,\n  \"seed\": oops\n}").unwrap();
    let out = svito()
        .args(["bsde-solve", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn unknown_config_field_is_usage_error() {
    let dir = temp_out("unknownfield");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("problem.json");
    std::fs::write(
        &cfg,
        r#"{
            "schema_version": 1, "seed": 1, "horizon": 1.0,
            "steps": 8, "paths": 50, "mystery_knob": 3,
            "terminal": {"deterministic": {"lo": 0.0, "hi": 1.0}},
            "driver": "zero"
        }"#,
    )
    .unwrap();
    let out = svito()
        .args(["bsde-solve", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mystery_knob"), "{err}");
}

#[test]
fn algebra_check_writes_content_addressed_artifacts() {
    let dir = temp_out("algebra");
    let out = svito()
        .args(["algebra-check", "--trials", "500", "--seed", "3", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let runs: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(runs.len(), 1);
    let run = runs[0].as_ref().unwrap().path();
    assert!(run.join("algebra.csv").exists());
    assert!(run.join("summary.txt").exists());
    // A different seed lands in a different directory.
    let out = svito()
        .args(["algebra-check", "--trials", "500", "--seed", "4", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 2);
}

#[test]
fn failed_check_exits_two() {
    // Converges, but an unreachably small residual tolerance fails the
    // rebuilt-equation check.
    let dir = temp_out("exit2");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("problem.json");
    std::fs::write(
        &cfg,
        r#"{
            "schema_version": 1, "seed": 5, "horizon": 1.0,
            "steps": 16, "paths": 500, "residual_tol": 1e-12,
            "terminal": {"brownian_shift": {"alpha": 0.0, "beta": 1.0}},
            "driver": "zero"
        }"#,
    )
    .unwrap();
    let out = svito()
        .args(["bsde-solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("runs"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn non_convergent_solve_exits_three() {
    // One sweep is not enough for a driver with feedback.
    let dir = temp_out("exit3");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("problem.json");
    std::fs::write(
        &cfg,
        r#"{
            "schema_version": 1, "seed": 5, "horizon": 0.25,
            "steps": 16, "paths": 500, "max_iter": 1, "tol": 1e-9,
            "terminal": {"brownian_square": {"alpha": 0.0, "beta": 0.5}},
            "driver": {"linear_z": {"gain": 1.0}}
        }"#,
    )
    .unwrap();
    let out = svito()
        .args(["bsde-solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("runs"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("non-convergent"), "{stdout}");
}

#[test]
fn small_bsde_solve_converges_and_dumps_solution() {
    let dir = temp_out("bsdesmall");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("problem.json");
    std::fs::write(
        &cfg,
        r#"{
            "schema_version": 1, "seed": 5, "horizon": 1.0,
            "steps": 32, "paths": 2000, "dump_paths": 4,
            "residual_tol": 0.25,
            "terminal": {"brownian_shift": {"alpha": 0.0, "beta": 1.0}},
            "driver": "zero"
        }"#,
    )
    .unwrap();
    let outdir = dir.join("runs");
    let out = svito()
        .args(["bsde-solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let run = std::fs::read_dir(&outdir)
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let picard = std::fs::read_to_string(run.join("picard_report.csv")).unwrap();
    assert!(picard.starts_with("iter,u_p,v_p,ratio_u,ratio_v,envelope"));
    let solution = std::fs::read_to_string(run.join("solution.csv")).unwrap();
    // 4 dumped paths over 33 nodes plus the header.
    assert_eq!(solution.lines().count(), 1 + 4 * 33);
}
