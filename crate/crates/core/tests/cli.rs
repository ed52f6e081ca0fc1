use std::path::PathBuf;
use std::process::{Command, Output};

use qacp::semantics::from_aut;

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .display()
        .to_string()
}

fn qacp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qacp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_inequivalence_with_a_counterexample() {
    let tiny = example("tiny.qacp");
    let o = qacp(&["check", &tiny, "X", "Y"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("is NOT equivalent"), "{out}");
    assert!(out.contains("counterexample: after a,"), "{out}");

    assert_eq!(qacp(&["check", &tiny, "X", "Z"]).status.code(), Some(0));
    assert_eq!(qacp(&["check", &tiny, "X", "Y", "--equivalence", "weak-trace"]).status.code(), Some(0));
    assert_eq!(qacp(&["check", &tiny, "X", "W"]).status.code(), Some(1));
    assert_eq!(qacp(&["check", &tiny, "X", "W", "--no-rooted"]).status.code(), Some(0));
}

#[test]
fn check_accepts_composite_terms() {
    let tiny = example("tiny.qacp");
    let o = qacp(&["check", &tiny, "a.(b + c)", "X", "--equivalence", "strong", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["counterexample"], serde_json::Value::Null);
}

#[test]
fn usage_and_input_errors_exit_with_2() {
    let tiny = example("tiny.qacp");
    assert_eq!(qacp(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qacp(&["explore", "/nonexistent.qacp"]).status.code(), Some(2));
    let o = qacp(&["check", &tiny, "X", "Q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown variable or action `Q`"));
    assert_eq!(qacp(&["simulate", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(qacp(&["explore", &tiny]).status.code(), Some(2), "no init and no term");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qacp");
    std::fs::write(&bad, "act a\nX = a.\n").unwrap();
    let o = qacp(&["parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at 2:6"));
}

#[test]
fn exported_aut_files_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qaqp.aut");
    let o = qacp(&[
        "explore",
        &example("qaqp.qacp"),
        "encap H in (S(0) || R(0))",
        "--delta",
        "1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // 40 printed states plus the 8 read_Q interleavings and rewind successors.
    assert_eq!(stdout(&o), "explored: 48 states, 70 transitions, 0 tau, 0 deadlocks\n");
    let lts = from_aut(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((lts.num_states(), lts.num_transitions()), (48, 70));

    let m = qacp(&["minimize", &example("qaqp.qacp"), "--delta", "1"]);
    assert_eq!(m.status.code(), Some(0));
    let q = from_aut(&stdout(&m)).unwrap();
    assert_eq!(q.num_states(), 5);
}

#[test]
fn parse_prints_a_reparsable_document() {
    let o = qacp(&["parse", &example("qaqp.qacp")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // Alice: S(b) plus S_1..S_6 per (b, d) = 2 + 24; Bob: five per b plus nine per (b, d) = 10 + 36.
    assert!(out.ends_with("// 72 equations after instantiation over 2 data values\n"), "{out}");
    qacp::syntax::parse(&out).unwrap();
}

#[test]
fn verify_exit_code_follows_the_verdict() {
    let o = qacp(&["verify-qaqp", "--delta", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pass = v["verdict"] == "Pass";
    assert_eq!(o.status.code(), Some(if pass { 0 } else { 1 }));
    assert_eq!(v["encapsulated"]["states"], 48);
    assert_eq!(v["external"]["states"], 2);
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn simulate_with_conformance_succeeds() {
    let o = qacp(&["simulate", "--p", "0.25", "--seed", "7", "--count", "20", "--conformance"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("delivered: 20/20 (in order)"), "{out}");
    assert!(out.contains("conformance: PASS"), "{out}");
}

#[test]
fn identical_flags_give_identical_output() {
    let runs: [&[&str]; 4] = [
        &["verify-qaqp", "--delta", "2"],
        &["simulate", "--p", "0.3", "--seed", "11", "--count", "6", "--noise", "phase-flip", "--json"],
        &["minimize", &example("qaqp.qacp"), "--format", "text"],
        &["check", &example("tiny.qacp"), "X", "Y", "--json"],
    ];
    for args in runs {
        let a = qacp(args);
        let b = qacp(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn simulation_trace_file_lists_labels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.txt");
    let o = qacp(&["simulate", "--count", "2", "--trace", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("send_P")).count(), 2);
    assert_eq!(text.lines().next(), Some("read_Q[d1]"));
}
