use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn elastab(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_elastab"));
    cmd.args(args).env_remove(elastab_cli::THREADS_VAR);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn bounds_writes_csv_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "b.json", r#"{"kappas": [1, 2], "lambda_over_mu": [1, 10]}"#);
    let out = tmp.path().join("out");
    let o = elastab(&["bounds", "--config", &cfg, "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(files(&out), ["bounds.csv", "manifest.json"]);
    let csv = std::fs::read_to_string(out.join("bounds.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("omega,kappa_s,lambda_over_mu,d,"));
    assert_eq!(lines.count(), 4);
    // κ = 1, d = 3, unit impedance: the ideal full bound is 7.0625
    assert!(csv.contains("7.0625000000000000e0"));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "bounds");
    assert_eq!(manifest["outputs"][0]["file"], "bounds.csv");
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["pass"], true);
}

#[test]
fn json_format_mirrors_csv_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "b.txt", "kappas = [1, 2]\nd = 2\n");
    let out = tmp.path().join("out");
    let o = elastab(&["bounds", "--config", &cfg, "--format", "json", "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(out.join("bounds.json")).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["d"], 2);
    assert!(rows[0]["fundamental"].is_null());
}

#[test]
fn malformed_config_exits_two_without_files() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write(tmp.path(), "bad.json", r#"{"kappas": [1, "#);
    let unknown = write(tmp.path(), "unknown.json", r#"{"kappas": [1], "colour": 3}"#);
    let empty = write(tmp.path(), "empty.json", "{}");
    for cfg in [&bad, &unknown, &empty] {
        let out = tmp.path().join("out");
        let o = elastab(&["bounds", "--config", cfg, "--out-dir", out.to_str().unwrap()], &[]);
        assert_eq!(o.status.code(), Some(2), "{cfg}");
        assert!(!out.exists(), "{cfg}");
    }
    let out = tmp.path().join("out");
    let o = elastab(&["fem-sweep", "--config", &bad, "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn usage_errors_exit_two() {
    let o = elastab(&["bounds", "--no-such-flag"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(elastab(&["frobnicate"], &[]).status.code(), Some(2));
    assert_eq!(elastab(&[], &[]).status.code(), Some(2));
    assert_eq!(elastab(&["identity-check", "--suite", "everything"], &[]).status.code(), Some(2));
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = elastab(&["bounds", "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn help_and_version_exit_zero() {
    let o = elastab(&["--help"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("identity-check"));
    let o = elastab(&["--version"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn invalid_thread_count_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "b.json", r#"{"kappas": [1]}"#);
    let out = tmp.path().join("out");
    for bad in ["0", "many"] {
        let o = elastab(&["bounds", "--config", &cfg, "--out-dir", out.to_str().unwrap()], &[("ELASTAB_THREADS", bad)]);
        assert_eq!(o.status.code(), Some(2));
        assert!(!out.exists());
    }
    let o = elastab(&["bounds", "--config", &cfg, "--out-dir", out.to_str().unwrap()], &[("ELASTAB_THREADS", "2")]);
    assert_eq!(o.status.code(), Some(0));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["threads"], 2);
}

#[test]
fn identity_check_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = tmp.path().join(name);
        let o = elastab(
            &["identity-check", "--suite", "all", "--seed", "7", "--out-dir", out.to_str().unwrap()],
            &[("ELASTAB_THREADS", threads)],
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
        std::fs::read(out.join("identity_reports.json")).unwrap()
    };
    let a = run("a", "1");
    let b = run("b", "1");
    let c = run("c", "3");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let reports: Value = serde_json::from_slice(&a).unwrap();
    assert!(reports.as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn single_suite_and_seed_override() {
    let tmp = tempfile::tempdir().unwrap();
    let read = |seed: &str| {
        let out = tmp.path().join(seed);
        let o =
            elastab(&["identity-check", "--suite", "robin", "--seed", seed, "--out-dir", out.to_str().unwrap()], &[]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_slice(&std::fs::read(out.join("identity_reports.json")).unwrap()).unwrap();
        v
    };
    let (a, b) = (read("1"), read("2"));
    assert!(a.as_array().unwrap().iter().all(|r| r["name"].as_str().unwrap().starts_with("robin.")));
    assert_ne!(a, b);
}

#[test]
fn fem_sweep_reports_rows_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "f.json", r#"{"kappas": [1, 2], "lambda_over_mu": [1, 100]}"#);
    let out = tmp.path().join("out");
    let o = elastab(&["fem-sweep", "--config", &cfg, "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(files(&out), ["fem_sweep.csv", "fem_sweep_summary.csv", "manifest.json"]);
    let csv = std::fs::read_to_string(out.join("fem_sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().next().unwrap().contains("c_emp"));
}

#[test]
fn violations_exit_one() {
    // Too few lattice points is a configuration error.
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "g.json", r#"{"n": 2}"#);
    let out = tmp.path().join("out");
    let o = elastab(&["greens-verify", "--config", &cfg, "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    // Coarse lattices violate the two-grid tolerance: a violation, not an error.
    let cfg =
        write(tmp.path(), "coarse.json", r#"{"kappas": [1], "sources": 1, "n": 12, "n_check": 10, "fourier": []}"#);
    let o = elastab(&["greens-verify", "--config", &cfg, "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(out.join("greens_sources.csv").exists() && out.join("manifest.json").exists());
}
