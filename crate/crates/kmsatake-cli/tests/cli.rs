//! End-to-end checks of the command-line driver: determinism, JSON
//! round-trips, exit codes and the content-addressed cache.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kmsatake"))
}

fn write_config(dir: &std::path::Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn a1_config(dir: &std::path::Path) -> PathBuf {
    write_config(
        dir,
        "a1.json",
        r#"{
  "schema": 1,
  "cartan": [[2]],
  "lattice": {"roots_on_basis": [[2]], "coroots_in_basis": [[1]]},
  "parameters": "equal"
}"#,
    )
}

fn a2_config(dir: &std::path::Path) -> PathBuf {
    write_config(dir, "a2.json", r#"{ "cartan": [[2, -1], [-1, 2]] }"#)
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kmsatake-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("KMSATAKE_CACHE_DIR").output().unwrap()
}

#[test]
fn rank_one_pretty_output() {
    let dir = tempdir("pretty");
    let cfg = a1_config(&dir);
    let out = run(&[
        "satake",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "1",
        "--depth",
        "2",
        "--q",
        "symbolic",
        "--route",
        "both",
    ]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "q*e^(1) + (q - 1)*e^(0) + q*e^(-1)"
    );
}

#[test]
fn mzero_is_one_in_finite_type() {
    let dir = tempdir("mzero");
    let cfg = a2_config(&dir);
    let out = run(&["mzero", "--config", cfg.to_str().unwrap(), "--depth", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("1\n"), "unexpected output: {text}");
    assert!(text.contains("witness m_sigma * H_0 = 1 through depth 4: ok"));
}

#[test]
fn tables_check_passes() {
    let out = run(&["tables-check", "--nmax", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.ends_with("pass")).count(), 9);
}

#[test]
fn byte_identical_output_across_runs() {
    let dir = tempdir("determinism");
    let cfg = a2_config(&dir);
    let args = [
        "satake",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "1,1",
        "--depth",
        "3",
        "--format",
        "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_output_round_trips() {
    let dir = tempdir("roundtrip");
    let cfg = a2_config(&dir);
    let out = run(&[
        "satake",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "0,1",
        "--depth",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["route"], "both");
    let series = kmsatake::io::series_from_json(&v["series"]).unwrap();
    let re_rendered = kmsatake::io::to_string_pretty(&kmsatake::io::series_to_json(&series));
    let original = kmsatake::io::to_string_pretty(&v["series"]);
    assert_eq!(re_rendered, original);
    // and the parsed series equals an in-process computation
    let rd = kmsatake::root_datum::RootDatum::build(
        kmsatake::root_datum::RootDatumConfig::from_json_str(
            r#"{ "cartan": [[2, -1], [-1, 2]] }"#,
        )
        .unwrap(),
    )
    .unwrap();
    let direct = kmsatake::satake::satake(
        &rd,
        &[0, 1],
        3,
        kmsatake::satake::Route::Both,
        kmsatake::satake::QMode::Symbolic,
    )
    .unwrap();
    assert_eq!(series, direct.series);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempdir("errors");
    let bad = write_config(&dir, "bad.json", r#"{ "cartan": [[2, -1], [-1, "x"]] }"#);
    let out = run(&["inspect", "--config", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cartan[1][1]"), "diagnostic missing: {err}");

    let affine = write_config(&dir, "affine.json", r#"{ "cartan": [[2, -2], [-2, 2]] }"#);
    let out = run(&["inspect", "--config", affine.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dependent"));
}

#[test]
fn element_cap_is_reported() {
    let dir = tempdir("cap");
    let cfg = write_config(
        &dir,
        "hyp.json",
        r#"{ "cartan": [[2, -3], [-3, 2]], "parameters": "equal" }"#,
    );
    let out = bin()
        .args([
            "satake",
            "--config",
            cfg.to_str().unwrap(),
            "--lambda",
            "1,1",
            "--depth",
            "4",
            "--element-cap",
            "5",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap"), "unexpected error: {err}");
}

#[test]
fn cache_replays_identical_bytes() {
    let dir = tempdir("cache");
    let cfg = a2_config(&dir);
    let cache = dir.join("cache");
    let args = [
        "character",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "1,1",
        "--depth",
        "4",
    ];
    let fresh = bin()
        .args(args)
        .env("KMSATAKE_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(fresh.status.success());
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let replay = bin()
        .args(args)
        .env("KMSATAKE_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert_eq!(fresh.stdout, replay.stdout);
    // a different command line misses the cache
    let other = bin()
        .args([
            "character",
            "--config",
            cfg.to_str().unwrap(),
            "--lambda",
            "1,1",
            "--depth",
            "3",
        ])
        .env("KMSATAKE_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(other.status.success());
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 2);
    assert_ne!(fresh.stdout, other.stdout);
}

#[test]
fn inspect_reports_classes() {
    let dir = tempdir("inspect");
    let cfg = write_config(
        &dir,
        "b2.json",
        r#"{ "cartan": [[2, -1], [-2, 2]] }"#,
    );
    let out = run(&["inspect", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["index_count"], 2);
    assert_eq!(v["equal_parameters"], false);
    assert_eq!(v["parameter_classes"].as_array().unwrap().len(), 2);
    assert_eq!(v["rho"][0], "3/2");
    assert_eq!(v["rho"][1], 2);
}

#[test]
fn hall_littlewood_rejects_unequal_parameters() {
    let dir = tempdir("unequal");
    let cfg = write_config(
        &dir,
        "a1q.json",
        r#"{
  "cartan": [[2]],
  "lattice": {"roots_on_basis": [[2]], "coroots_in_basis": [[1]]},
  "parameters": "auto"
}"#,
    );
    let out = run(&[
        "hall-littlewood",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "1",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("equal parameters"));
}
