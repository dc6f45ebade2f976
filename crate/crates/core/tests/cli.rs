use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dsmqr::harness::CSV_HEADER;

fn dsmqr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsmqr"))
        .args(args)
        .output()
        .expect("spawn dsmqr")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_prints_key_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "disk.cfg", "R = 1.5\nmethods = dsm-qr\n");
    let out = dsmqr(&["solve", &cfg, "--n", "11"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let value = |key: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}=")))
            .unwrap_or_else(|| panic!("missing {key}"))
            .to_string()
    };
    assert_eq!(value("method"), "dsm-qr");
    assert_eq!(value("N"), "11");
    let cond: f64 = value("cond2").parse().unwrap();
    let closed: f64 = value("cond2_closed_form").parse().unwrap();
    assert!((cond - closed).abs() < 1e-10);
}

#[test]
fn sweep_is_deterministic_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.cfg",
        "R = 1.5\nl_max = 6\nmethods = dsm, dsm-qr, mfs\ntiming = off\n",
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = dsmqr(&["sweep", &cfg, "--out", path.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 3 * 6);
}

#[test]
fn sweep_writes_to_stdout_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "poly.cfg",
        "geometry = poly5\nl_max = 2\nmethods = dsm-qr-jordan\n",
    );
    let out = dsmqr(&["sweep", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.starts_with("dsm-qr-jordan,poly,")));
}

#[test]
fn basis_dump_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "disk.cfg", "methods = dsm-qr\n");
    let out = dsmqr(&[
        "basis-dump",
        &cfg,
        "--n",
        "5",
        "--radial",
        "3",
        "--angular",
        "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,s,theta,value");
    assert_eq!(lines.len(), 1 + 5 * 3 * 4);
    // ψ_1 = √N everywhere
    let first: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((first - 5f64.sqrt()).abs() < 1e-14);
}

#[test]
fn verify_passes() {
    let out = dsmqr(&["verify"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.is_empty());
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.cfg", "colour = red\n");
    assert_eq!(dsmqr(&["sweep", &cfg]).status.code(), Some(2));
    let cfg = write_config(dir.path(), "mismatch.cfg", "geometry = poly5\n");
    assert_eq!(
        dsmqr(&["solve", &cfg, "--n", "5", "--method", "dsm-qr"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.cfg");
    assert_eq!(
        dsmqr(&["solve", missing.to_str().unwrap(), "--n", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn even_source_count_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "disk.cfg", "methods = dsm\n");
    let out = dsmqr(&["solve", &cfg, "--n", "4"]);
    assert!(!out.status.success());
}
