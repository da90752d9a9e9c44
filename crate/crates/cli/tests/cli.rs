use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ceerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ceerlab")).args(args).output().expect("run ceerlab")
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 temp path")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn construct_then_decode_p3() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p3.json");
    let trace = dir.path().join("t.json");
    fs::write(&graph, r#"{"kind":"graph","verts":[0,1,2],"edges":[[0,1],[1,2]]}"#).unwrap();
    let o = ceerlab(&["construct", "--graph", p(&graph), "--stages", "500", "--out", p(&trace)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["records"].as_array().unwrap().len(), 500);
    assert_eq!(t["ceer"]["kind"], "staged");
    assert_eq!(t["ceer"]["pairing"], "cantor");

    let o = ceerlab(&["decode", "--trace", p(&trace), "--audit"]);
    assert_eq!(o.status.code(), Some(0));
    let g: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(g["edges"], serde_json::json!([[0, 1], [1, 2]]));
}

#[test]
fn construct_from_dot_with_ws() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c4.dot");
    let ws = dir.path().join("ws.json");
    let trace = dir.path().join("t.json");
    fs::write(&graph, "graph G {\n  0 -- 1 -- 2 -- 3 -- 0;\n}\n").unwrap();
    fs::write(&ws, r#"[{"schedule": [[3, 2], [5, 12]]}, "evens", "empty"]"#).unwrap();
    let o = ceerlab(&["construct", "--graph", p(&graph), "--ws", p(&ws), "--stages", "300", "--out", p(&trace)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ceerlab(&["decode", "--trace", p(&trace), "--audit", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("0 -- 3;"));
}

#[test]
fn name_trace_decodes_to_label_graph() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("name.json");
    let o = ceerlab(&["construct", "--name-pairs", "0:1", "--stages", "4", "--out", p(&trace)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(t["label_metadata"].is_object());
    let o = ceerlab(&["decode", "--trace", p(&trace), "--audit"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(g["verts"].as_array().unwrap().len(), 6);
    assert_eq!(g["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn fixture_probe_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("f.json");
    assert_eq!(ceerlab(&["fixture", "--family", "double-cover", "--out", p(&fx)]).status.code(), Some(0));
    let o = ceerlab(&["probe", "--poset", p(&fx), "--op", "smc_pairs"]);
    let smc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let covers: Vec<&str> = smc.as_array().unwrap().iter().map(|s| s["cover"].as_str().unwrap()).collect();
    assert_eq!(covers, ["a", "b"]);
    let o = ceerlab(&["probe", "--poset", p(&fx), "--op", "decode-gc"]);
    let g: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(g["edges"], serde_json::json!([["r1", "r2"]]));
    let o = ceerlab(&["probe", "--poset", p(&fx), "--op", "audit"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
    let o = ceerlab(&["export-dot", "--input", p(&fx)]);
    assert!(stdout(&o).starts_with("digraph P {"));
}

#[test]
fn name_label_probe() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("f.json");
    assert_eq!(ceerlab(&["fixture", "--family", "name-label", "--out", p(&fx)]).status.code(), Some(0));
    let o = ceerlab(&["probe", "--poset", p(&fx), "--op", "name-decodes"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let pairs: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(pairs.as_array().unwrap().len(), 1);
}

#[test]
fn broken_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("f.json");
    assert_eq!(ceerlab(&["fixture", "--family", "single-cover", "--out", p(&fx)]).status.code(), Some(0));
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&fx).unwrap()).unwrap();
    v["expect"]["graphs"][0]["edges"] = serde_json::json!([["r1", "r2"]]);
    fs::write(&fx, v.to_string()).unwrap();
    let o = ceerlab(&["probe", "--poset", p(&fx), "--op", "audit"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn translate_and_check() {
    let o = ceerlab(&["translate", "--from", "arith", "--to", "poset", "--mode", "ni", "forall x. x + x = x"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("NI(x, w)") && text.contains("Gni_Plus(x, x, x, w)"), "{text}");
    let o = ceerlab(&["translate", "--from", "arith", "--to", "graph", "--expand", "x + y = z"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("Plus("));
    assert_eq!(ceerlab(&["translate", "--from", "poset", "--to", "arith", "x <= y"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let st = dir.path().join("a.json");
    fs::write(&st, r#"{"kind":"arith","n":6}"#).unwrap();
    let check = |f: &str, expect: &str| ceerlab(&["check", "--structure", p(&st), "--formula", f, "--expect", expect]).status.code();
    assert_eq!(check("forall x. exists y. x + y = x", "true"), Some(0));
    assert_eq!(check("exists x. x * x = x & !(x + x = x) & x = x", "true"), Some(0));
    assert_eq!(check("exists x. x + x = x & !(x = x)", "true"), Some(1));
    let o = ceerlab(&["check", "--structure", p(&st), "--formula", "x + x = y", "--assign", "x=3", "--assign", "y=6"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn gadget_output() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    assert_eq!(ceerlab(&["gadget", "--n", "2", "--out", p(&g)]).status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(v["kind"], "graph");
    let o = ceerlab(&["check", "--structure", p(&g), "--formula", "exists x. exists y. E(x, y)", "--macros", "none"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn verify_prints_seed_and_is_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let a = ceerlab(&["verify", "--suite", "construction", "--seed", "9", "--out", p(&out)]);
    let b = ceerlab(&["verify", "--suite", "construction", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("ceerlab verify suite=construction seed=9\n"));
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["seed"], 9);
    assert_eq!(r["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ceerlab(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(ceerlab(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(ceerlab(&["construct", "--graph", "/nonexistent/g.json"]).status.code(), Some(2));
    assert_eq!(ceerlab(&["construct", "--graph", "x.json", "--stages", "0"]).status.code(), Some(2));
    assert_eq!(ceerlab(&["fixture", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(ceerlab(&[]).status.code(), Some(2));
    assert_eq!(ceerlab(&["--help"]).status.code(), Some(0));
}
