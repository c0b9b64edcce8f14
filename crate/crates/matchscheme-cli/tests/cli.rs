//! End-to-end tests of the `matchscheme` binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchscheme"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn enumerate_small() {
    let out = run_ok(&["enumerate", "--n", "2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, vec!["1-2|3-4", "1-3|2-4", "1-4|2-3"]);
}

#[test]
fn enumerate_count_only_n7() {
    let out = run_ok(&["enumerate", "--n", "7", "--count-only"]);
    assert_eq!(out.trim(), "135135");
}

#[test]
fn spectrum_csv_n3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(&[
        "spectrum",
        "--n",
        "3",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.contains("partition,eigenvalue,multiplicity,depth,sign_consistency"));
    assert!(out.contains("[3],8,1,0,consistent"));
    assert!(out.contains("\"[2,1]\",-2,9,1,consistent"));
}

#[test]
fn verify_conjectures_exit_zero_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "--suite",
        "conjectures",
        "--n",
        "3..4",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ];
    let a = run_ok(&args);
    let b = run_ok(&args);
    let ja: serde_json::Value = serde_json::from_str(&a).unwrap();
    let jb: serde_json::Value = serde_json::from_str(&b).unwrap();
    // Reports must be byte-identical across runs; meta carries the clock.
    assert_eq!(
        serde_json::to_string(&ja["reports"]).unwrap(),
        serde_json::to_string(&jb["reports"]).unwrap()
    );
    let reports = ja["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn scheme_writes_cache_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(&[
        "scheme",
        "--n",
        "3",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    let entry: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(entry["n"], 3);
    assert_eq!(entry["format_version"], 1);
    assert_eq!(entry["sphere_sizes"][0], "8");
    assert!(dir.path().join("scheme-n3.json").exists());
}

#[test]
fn budget_exhaustion_reports_inconclusive_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "ekr-verify",
            "--n",
            "4",
            "--mode",
            "enumerate",
            "--budget",
            "1",
            "--cache-dir",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("inconclusive"));
}

#[test]
fn chain_tie_gives_exit_one_on_ekr_suite_n3() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "verify",
            "--suite",
            "ekr",
            "--n",
            "3",
            "--cache-dir",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    // The documented zonal-chain tie at n = 3 is reported as a failure.
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("spectrum.zonal-chain.n3"));
}

#[test]
fn bad_arguments_exit_three() {
    let out = bin()
        .args(["enumerate", "--n", "99"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
}
