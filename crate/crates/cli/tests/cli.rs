use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_cubic");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.txt"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn cubic")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Scratch directory unique to this process and test.
fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cubic-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

/// Drops timing fields, which vary run to run.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// Compares `--json` output with `tests/golden/<name>.json`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut got: Value = serde_json::from_slice(&o.stdout).expect("json output");
    strip_timing(&mut got);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
    }
    let want: Value = serde_json::from_str(&std::fs::read_to_string(&path).expect("golden file")).unwrap();
    assert_eq!(got, want, "{name}");
}

#[test]
fn golden_paut() {
    golden("paut_small_9_5", &["paut", fixture("small_9_5").to_str().unwrap()]);
}

#[test]
fn golden_decompose() {
    golden("decompose_nondistinct_6_3", &["decompose", fixture("nondistinct_6_3").to_str().unwrap()]);
}

#[test]
fn golden_canonical() {
    golden("canonical_order3_18_6", &["canonical", fixture("order3_18_6").to_str().unwrap()]);
}

#[test]
fn golden_involutions() {
    golden("involutions_pair_basis_18_4", &["involutions", fixture("pair_basis_18_4").to_str().unwrap()]);
}

#[test]
fn golden_analyze() {
    golden("analyze_reduction_15_5", &["analyze", fixture("reduction_15_5").to_str().unwrap()]);
}

#[test]
fn golden_enumerate() {
    golden("enumerate_9_5", &["enumerate", "--length", "9", "--dim", "5"]);
}

#[test]
fn golden_count() {
    golden("count_27_5", &["count", "--length", "27", "--dim", "5"]);
}

#[test]
fn count_text() {
    let o = run(&["count", "--length", "24", "--dim", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "8206520925\n");
}

#[test]
fn equivalence_witness() {
    let dir = scratch("equiv");
    let a = dir.join("a.txt");
    let b = dir.join("b.txt");
    std::fs::write(&a, "6 2\n110000\n001100\n").unwrap();
    std::fs::write(&b, "6 2\n000011\n100100\n").unwrap();
    let o = run(&["--json", "equivalent", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["equivalent"], Value::Bool(true));

    std::fs::write(&b, "6 2\n111000\n000111\n").unwrap();
    let o = run(&["equivalent", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "not equivalent\n");
}

#[test]
fn construct_builds_cubic_code() {
    let dir = scratch("construct");
    let b = dir.join("b.txt");
    let q = dir.join("q.txt");
    std::fs::write(&b, "2 1\n11\n").unwrap();
    std::fs::write(&q, "2 1\n10\n").unwrap();
    let o = run(&["--json", "construct", "-B", b.to_str().unwrap(), "-Q", q.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(6), Some(3)));
}

#[test]
fn enumerate_writes_csv() {
    let dir = scratch("csv");
    let path = dir.join("classes.csv");
    let o = run(&["enumerate", "--length", "6", "--dim", "5", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("class_id,representative,paut_order,fingerprint"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn parse_error_exits_2() {
    let dir = scratch("parse");
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "6 1\n1102x0\n").unwrap();
    let o = run(&["paut", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn guard_exits_3() {
    let o = run(&["enumerate", "--length", "24", "--dim", "5"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["enumerate", "--length", "9", "--dim", "5", "--budget", "10"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bad_length_is_a_plain_failure() {
    let o = run(&["count", "--length", "10", "--dim", "5"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_only_filters_categories() {
    let o = run(&["--json", "verify-paper", "--only", "count,fixtures"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r["category"] == "count" || r["category"] == "fixtures"));
    assert_eq!(v["failed"], 0);
    assert_eq!(code(&run(&["verify-paper", "--only", "nope"])), 1);
}

#[test]
fn verify_command_is_green() {
    let o = run(&["verify-paper"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8(o.stdout).unwrap().contains(" 0 failed"));
}

#[test]
fn tampered_fixture_fails_with_4() {
    let dir = scratch("tamper");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    for e in std::fs::read_dir(&src).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    let target = dir.join("small_9_5.txt");
    let text = std::fs::read_to_string(&target).unwrap();
    // Flip the last bit of the last row.
    let pos = text.rfind(['0', '1']).unwrap();
    let mut bytes = text.into_bytes();
    bytes[pos] = if bytes[pos] == b'0' { b'1' } else { b'0' };
    std::fs::write(&target, bytes).unwrap();

    let o = run(&["--json", "verify-paper", "--fixtures", dir.to_str().unwrap(), "--only", "fixtures,paut"]);
    assert_eq!(code(&o), 4);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pass"] == false)
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"checksum-small_9_5"), "{failed:?}");

    // The untouched directory passes.
    let clean = scratch("clean");
    for e in std::fs::read_dir(&src).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, clean.join(p.file_name().unwrap())).unwrap();
    }
    let o = run(&["verify-paper", "--fixtures", clean.to_str().unwrap(), "--only", "fixtures"]);
    assert_eq!(code(&o), 0);
}
