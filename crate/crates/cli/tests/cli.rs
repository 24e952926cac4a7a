use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descent-loewy"))
        .args(args)
        .env_remove("DESCENT_LOEWY_CAP")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

/// The JSON report is the last line on stdout.
fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    serde_json::from_str(stdout.lines().last().unwrap()).unwrap()
}

#[test]
fn loewy_small_cases() {
    let r = report(&["loewy", "A", "1"]);
    assert_eq!(r["command"], "loewy");
    assert_eq!(r["payload"]["loewy_length"], 1);
    let r = report(&["loewy", "B", "4"]);
    assert_eq!(r["payload"]["loewy_length"], 2);
    let r = report(&["--method", "group-direct", "loewy", "D", "4"]);
    assert_eq!(r["payload"]["loewy_length"], 2);
}

#[test]
fn verify_examples() {
    let r = report(&["verify", "phi", "B", "2"]);
    assert_eq!(r["payload"]["check_count"], 4);
    assert_eq!(r["payload"]["passed"], true);
    let out = run(&["verify", "semigroup", "D", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("9 faces"));
    assert_eq!(code(&["verify", "lemmas", "D", "4"]), 0);
    assert_eq!(code(&["verify", "all", "A", "2"]), 0);
}

#[test]
fn quiver_of_b2() {
    let r = report(&["quiver", "B", "2"]);
    assert_eq!(r["payload"]["vertex_count"], 6);
    assert_eq!(r["payload"]["arrow_count"], 8);
}

#[test]
fn invariant_quiver_counts_classes() {
    let out = run(&["quiver", "D", "4", "--invariant"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let r: Value = serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    assert_eq!(r["payload"]["vertex_count"], 11);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["verify", "bogus", "B", "2"]), 64);
    assert_eq!(code(&["loewy", "E", "6"]), 64);
    assert_eq!(code(&["loewy", "D", "1"]), 64);
    assert_eq!(code(&["loewy"]), 64);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["loewy", "D", "9"]), 3);
    assert_eq!(code(&["loewy", "D", "7"]), 64);
    assert_eq!(code(&["quiver", "B", "2", "--dot", "/nonexistent/dir/q.dot"]), 74);
    assert_eq!(code(&["--json", "/nonexistent/dir/r.json", "loewy", "B", "2"]), 74);
}

#[test]
fn resource_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_descent-loewy"))
        .args(["loewy", "B", "4"])
        .env("DESCENT_LOEWY_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn exports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    for i in 0..2 {
        let (dot, json) = (p(&format!("q{i}.dot")), p(&format!("q{i}.json")));
        let args = ["--json", json.to_str().unwrap(), "quiver", "B", "3", "--dot", dot.to_str().unwrap()];
        assert_eq!(code(&args), 0);
        let inv = (p(&format!("i{i}.dot")), p(&format!("i{i}.json")));
        let args = ["--json", inv.1.to_str().unwrap(), "quiver", "D", "5", "--invariant", "--dot", inv.0.to_str().unwrap()];
        assert_eq!(code(&args), 0);
        let l = p(&format!("l{i}.json"));
        assert_eq!(code(&["--json", l.to_str().unwrap(), "loewy", "D", "4"]), 0);
    }
    for stem in ["q", "i"] {
        assert_eq!(read(&p(&format!("{stem}0.dot"))), read(&p(&format!("{stem}1.dot"))));
        assert!(String::from_utf8(read(&p(&format!("{stem}0.dot")))).unwrap().starts_with("digraph"));
    }
    for stem in ["q", "i", "l"] {
        let a = read(&p(&format!("{stem}0.json")));
        assert_eq!(a, read(&p(&format!("{stem}1.json"))));
        let v: Value = serde_json::from_slice(&a).unwrap();
        assert!(v.get("wall_ms").is_none() || v["wall_ms"].is_null());
        assert!(v["conventions"].is_object());
    }
}

#[test]
fn orbits_table() {
    let r = report(&["orbits", "D", "4"]);
    let rows = r["payload"]["classes"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
}
