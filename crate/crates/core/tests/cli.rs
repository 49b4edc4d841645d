//! End-to-end runs of the `mubkit` binary.

use std::path::Path;
use std::process::{Command, Output};

use mubkit::entangle::{BellFile, BellReport};
use mubkit::mub::{MubFile, MubReport};
use mubkit::states::CLASSIFY_TOL;

fn mubkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubkit")).args(args).env_remove("MUBKIT_TOLERANCE").output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mub_gen_then_verify_field() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f3.json");
    let gen = mubkit(&["mub", "gen", "--p", "3", "--m", "1", "--out", path_str(&file)]);
    assert_eq!(gen.status.code(), Some(0));
    let verify = mubkit(&["mub", "verify", path_str(&file)]);
    assert_eq!(verify.status.code(), Some(0));
    let report: MubReport = serde_json::from_slice(&verify.stdout).unwrap();
    assert!(report.verdict);
    assert_eq!(report.base_count, 4);
    let table = String::from_utf8(verify.stderr).unwrap();
    assert!(table.contains("verdict: complete MUB set"), "{table}");

    // the printed report equals the in-memory one
    let loaded: MubFile = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(loaded.verify(CLASSIFY_TOL).unwrap(), report);
}

#[test]
fn characteristic_two_without_ring_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mubkit(&["mub", "gen", "--p", "2", "--m", "2", "--out", path_str(&dir.path().join("x.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("gcd(2, q) = 2"));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn unknown_flag_prints_usage() {
    let out = mubkit(&["mub", "gen", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Usage"));
}

#[test]
fn outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(mubkit(&["mub", "gen", "--ring", "--m", "3", "--out", path_str(p)]).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let g1 = mubkit(&["gauss-table", "--p", "5", "--m", "2"]);
    let g2 = mubkit(&["gauss-table", "--p", "5", "--m", "2"]);
    assert_eq!(g1.stdout, g2.stdout);
    let s1 = mubkit(&["phase-stats", "--p", "3", "--m", "2", "--a", "4", "--k", "1", "--beta", "0.25"]);
    let s2 = mubkit(&["phase-stats", "--p", "3", "--m", "2", "--a", "4", "--k", "1", "--beta", "0.25"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn gauss_table_row_k0() {
    let out = mubkit(&["gauss-table", "--p", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row.split(',').take(4).collect::<Vec<_>>(), ["9", "0", "8", "0"]);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(6) == Some("true")));
}

#[test]
fn bell_gen_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (args, name) in [
        (vec!["--kind", "mult", "--q", "4"], "mult.json"),
        (vec!["--kind", "field", "--p", "3", "--m", "2"], "field.json"),
        (vec!["--kind", "ring", "--m", "2"], "ring.json"),
    ] {
        let file = dir.path().join(name);
        let mut gen = vec!["bell", "gen"];
        gen.extend(args);
        gen.extend(["--out", path_str(&file)]);
        assert_eq!(mubkit(&gen).status.code(), Some(0), "{gen:?}");
        let verify = mubkit(&["bell", "verify", path_str(&file)]);
        assert_eq!(verify.status.code(), Some(0));
        let report: BellReport = serde_json::from_slice(&verify.stdout).unwrap();
        let loaded: BellFile = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
        assert_eq!(loaded.verify(CLASSIFY_TOL), report);
        assert!(report.verdict);
    }
    let missing = mubkit(&["bell", "gen", "--kind", "field", "--out", path_str(&dir.path().join("x.json"))]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn tolerance_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.json");
    let mut mub = MubFile::field(&mubkit::finitefield::GaloisField::new(3, 1).unwrap(), 0).unwrap();
    mub.bases[0] = mub.bases[0].perturbed(0, 0, num_complex::Complex64::new(1e-6, 0.0));
    std::fs::write(&file, serde_json::to_string(&mub).unwrap()).unwrap();

    let strict = mubkit(&["mub", "verify", path_str(&file)]);
    assert_eq!(strict.status.code(), Some(1));
    let loose = Command::new(env!("CARGO_BIN_EXE_mubkit"))
        .args(["mub", "verify", path_str(&file)])
        .env("MUBKIT_TOLERANCE", "1e-4")
        .output()
        .unwrap();
    assert_eq!(loose.status.code(), Some(0));
    let flag = mubkit(&["--tolerance", "1e-4", "mub", "verify", path_str(&file)]);
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn weil_check_exhaustive_quadratics() {
    let out = mubkit(&["weil-check", "--p", "3", "--m", "2", "--degree", "2", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 81);
}

#[test]
fn verify_missing_file_is_a_usage_error() {
    assert_eq!(mubkit(&["mub", "verify", "/nonexistent/file.json"]).status.code(), Some(2));
}
