//! End-to-end tests of the `verify` binary: flag handling, config files,
//! report shape, exit codes and reproducibility.
//!
//! Exit status 1 (a check that fails) cannot be produced here without lying:
//! every identity the suites verify actually holds. The 0/1 mapping is
//! covered at the unit level on synthesized reports instead
//! (`cli::tests::exit_codes_follow_the_summary`).

use gl3_bethe::cli::Report;
use std::path::Path;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_verify"));
    cmd.args(args);
    // Tests control the fallback output directory explicitly.
    cmd.env_remove("GL3_BETHE_OUT_DIR");
    cmd
}

fn read_report(path: &Path) -> Report {
    let text = std::fs::read_to_string(path).expect("report file exists");
    serde_json::from_str(&text).expect("report parses")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn default_run_passes_and_writes_a_well_formed_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = verify(&["--no-timings", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let report = read_report(&out);
    assert_eq!(report.version, 1);
    assert_eq!(report.tool.name, "gl3-bethe");
    assert_eq!(report.config.chain_len, 3);
    assert_eq!(report.config.split, 1);
    assert_eq!(report.config.seed, 1);
    assert_eq!(report.summary.fail, 0);
    assert!(report.summary.ok > 300, "the default grid is not tiny");
    assert!(report.summary.skipped > 0, "T32 at b = 0 must be reported");
    assert_eq!(
        report.summary.ok + report.summary.fail + report.summary.skipped,
        report.checks.len()
    );
    // Sorted by (suite, instance).
    let keys: Vec<_> = report
        .checks
        .iter()
        .map(|c| (c.suite.clone(), c.instance.clone()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    // --no-timings zeroes the clock fields.
    assert!(report.checks.iter().all(|c| c.wall_ms == 0));
}

#[test]
fn single_suite_flags_select_and_echo() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("theorem1.json");
    let status = verify(&[
        "--suite",
        "theorem1",
        "--L",
        "3",
        "--split",
        "1",
        "--a",
        "2",
        "--b",
        "2",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ])
    .status()
    .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_report(&out);
    assert_eq!(report.config.suites, vec!["theorem1"]);
    assert_eq!(report.config.seed, 7);
    assert!(report.checks.iter().all(|c| c.suite == "theorem1"));
    // 3 × 3 grid, one sample each.
    assert_eq!(report.checks.len(), 9);
    assert_eq!(report.summary.fail, 0);
    assert_eq!(report.summary.skipped, 0);
}

#[test]
fn config_files_drive_the_run_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(
        &cfg,
        r#"{
            "suites": ["rtt", "weight"],
            "L": 2,
            "split": 1,
            "a_max": 1,
            "b_max": 1,
            "seed": 5,
            "c": "1/2",
            "xi": ["0", "9"],
            "twist1": ["2", "3", "5"],
            "twist2": ["7", "1", "2"],
            "twist": ["14", "3", "10"]
        }"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let status = verify(&[
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "6",
        "--out",
        out.to_str().unwrap(),
    ])
    .status()
    .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_report(&out);
    assert_eq!(report.config.suites, vec!["rtt", "weight"]);
    assert_eq!(report.config.c, "1/2");
    assert_eq!(report.config.xi, vec!["0", "9"]);
    assert_eq!(report.config.seed, 6, "the flag overrides the file");
    assert_eq!(report.summary.fail, 0);
}

#[test]
fn bad_inputs_exit_two_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();

    // Malformed JSON.
    let cfg = dir.path().join("broken.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    let out = verify(&["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("verify:"));

    // Unknown key.
    let cfg = dir.path().join("typo.json");
    std::fs::write(&cfg, r#"{"lenght": 3}"#).unwrap();
    let out = verify(&["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unknown suite.
    let out = verify(&["--suite", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("unknown suite"));

    // Zero model constant.
    let out = verify(&["--c", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Split beyond the chain end.
    let out = verify(&["--L", "2", "--split", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Chain longer than the cap.
    let out = verify(&["--L", "9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("cap"));
}

#[test]
fn reports_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        vec![
            "--no-timings".to_string(),
            "--suite".into(),
            "bethe-equiv".into(),
            "--suite".into(),
            "actions".into(),
            "--L".into(),
            "2".into(),
            "--a".into(),
            "1".into(),
            "--b".into(),
            "1".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let out1 = dir.path().join("r1.json");
    let out2 = dir.path().join("r2.json");
    assert_eq!(verify(&[]).args(args(&out1)).status().unwrap().code(), Some(0));
    assert_eq!(verify(&[]).args(args(&out2)).status().unwrap().code(), Some(0));
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert_eq!(b1, b2);

    // More worker threads: same bytes.
    let out3 = dir.path().join("r3.json");
    let mut a3 = args(&out3);
    a3.extend(["--jobs".to_string(), "4".into()]);
    assert_eq!(verify(&[]).args(a3).status().unwrap().code(), Some(0));
    let r1: Report = serde_json::from_slice(&b1).unwrap();
    let r3 = read_report(&out3);
    assert_eq!(
        serde_json::to_string(&r1.checks).unwrap(),
        serde_json::to_string(&r3.checks).unwrap(),
        "parallel execution must not change any outcome"
    );
}

#[test]
fn env_var_supplies_the_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let status = verify(&["--suite", "rtt", "--L", "1"])
        .env("GL3_BETHE_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_report(&dir.path().join("report.json"));
    assert_eq!(report.summary.fail, 0);
    assert_eq!(report.checks.len(), 1);
}

#[test]
fn stdout_is_the_fallback_destination() {
    let out = verify(&["--suite", "rtt", "--L", "1", "--no-timings"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).expect("stdout is the report");
    assert_eq!(report.summary.fail, 0);
}
