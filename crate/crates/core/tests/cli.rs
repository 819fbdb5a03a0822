use std::path::Path;
use std::process::{Command, Output};

fn ct(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ct"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_check_solve_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = ct(&["gen", "hk", "--k", "1"], d);
    assert!(g.status.success());
    std::fs::write(d.join("hk1.graph"), &g.stdout).unwrap();

    let c = ct(&["check", "hk1.graph"], d);
    assert_eq!(c.status.code(), Some(0));
    assert!(stdout(&c).contains("4-chordal: yes"));

    let s = ct(&["solve", "hk1.graph", "--trace", "t.jsonl"], d);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).contains("size: 4\nbound: 4"));

    let v = ct(&["verify", "hk1.graph", "--trace", "t.jsonl"], d);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("7*4 = 2*15 + 1 - 3"));

    let miss = ct(&["verify", "hk1.graph", "--set", "1"], d);
    assert_eq!(miss.status.code(), Some(1));
    assert!(stdout(&miss).contains("missed clique"));
}

#[test]
fn tampered_trace_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(ct(&["solve", "hk:1", "--trace", "t.jsonl"], d).status.success());
    let text = std::fs::read_to_string(d.join("t.jsonl")).unwrap();
    let cut: Vec<&str> = text.lines().filter(|l| !l.contains("\"kind\":\"colored\"")).collect();
    std::fs::write(d.join("bad.jsonl"), cut.join("\n")).unwrap();
    let v = ct(&["verify", "hk:1", "--trace", "bad.jsonl"], d);
    assert_eq!(v.status.code(), Some(3));
}

#[test]
fn json_output_uses_zero_based_ids() {
    let dir = tempfile::tempdir().unwrap();
    let o = ct(&["solve", "hk:1", "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["red"], serde_json::json!([3, 5, 10, 12]));
}

#[test]
fn oracle_cap_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(ct(&["oracle", "lower:23", "--cap", "2"], d).status.code(), Some(2));
    let o = ct(&["oracle", "hk:1"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("minimum: 4"));

    assert_eq!(ct(&["solve", "missing.graph"], d).status.code(), Some(1));
    std::fs::write(d.join("c4.graph"), "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n").unwrap();
    let c4 = ct(&["solve", "c4.graph"], d);
    assert_eq!(c4.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&c4.stderr).contains("not 4-chordal"));
}

#[test]
fn fuzz_reports_every_instance() {
    let dir = tempfile::tempdir().unwrap();
    let o = ct(&["fuzz", "--count", "50", "--nodes", "10"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("50/50 within bound"));
}
