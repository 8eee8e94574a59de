use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;

use leavitt_cli::{
    ActRecord, ConnectorsOut, ConnectorsRecord, CyclesRecord, ExtRecord, NfRecord, OracleRecord, SelftestRecord,
    TableRecord,
};
use leavitt_core::ext::{CaseTag, Dim};
use leavitt_core::report::{Report, Status};

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/example.graph")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leavitt"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Runs with `--json`, parses the record and checks that it serializes back to the same JSON.
fn json<T: Serialize + DeserializeOwned>(args: &[&str]) -> T {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let record: T = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(serde_json::to_string_pretty(&record).unwrap() + "\n", text);
    record
}

fn graph_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn cycles_listing() {
    let g = fixture();
    let text = stdout(&["cycles", g.to_str().unwrap()]);
    assert_eq!(text.lines().count(), 5);
    let r: CyclesRecord = json(&["cycles", g.to_str().unwrap()]);
    let mut exclusive: Vec<&str> = r.cycles.iter().filter(|c| c.exclusive).map(|c| c.name.as_str()).collect();
    exclusive.sort();
    assert_eq!(exclusive, ["a", "d", "l"]);
    assert!(r.cycles.iter().any(|c| c.name == "g'" && !c.exclusive));
    assert!(r.cycles.iter().any(|c| c.name == "g" && !c.exclusive));
}

#[test]
fn empty_and_malformed_graphs() {
    let empty = graph_file("");
    assert_eq!(stdout(&["cycles", empty.path().to_str().unwrap()]), "");
    let bad = graph_file("vertex u v\nedge e u\n");
    let out = run(&["cycles", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn normal_forms() {
    let g = fixture();
    let g = g.to_str().unwrap();
    assert_eq!(stdout(&["nf", g, "d1* d1"]), "s2\n");
    assert_eq!(stdout(&["nf", g, "t1 - g'g'* - g1 g1* - h h*"]), "0\n");
    assert_eq!(stdout(&["--field", "F3", "nf", g, "1/2 s1"]), "2 s1\n");
    let out = run(&["nf", g, "d1 d3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not composable"));
    let r: NfRecord = json(&["nf", g, "d1 d1* + d1* d1"]);
    assert_eq!(r.normal_form, "s1 + s2");
}

#[test]
fn ext_values() {
    let g = fixture();
    let g = g.to_str().unwrap();
    let ext = |s: &str, t: &str| -> ExtRecord { json(&["ext", g, "--source", s, "--target", t, "--oracle", "4"]) };
    let r = ext("d:1/2x^2-1", "l:x^3-3x-1");
    assert_eq!((r.value, r.case), (Dim::Finite(6), CaseTag::DistinctExclusive));
    assert_eq!(r.connectors, Some(ConnectorsOut::Finite { paths: vec!["d1 d2 m n".into()] }));
    assert!(matches!(r.oracle, Some(OracleRecord::Ran { agrees: true, .. })));
    let r = ext("d:1/2x^2-1", "a:x^3-3x-1");
    assert_eq!(r.value, Dim::Infinite);
    assert!(matches!(r.oracle, Some(OracleRecord::Ran { agrees: true, .. })));
    let r = ext("g:1/2x^2-1", "d:x^3-3x-1");
    assert_eq!((r.value, r.case), (Dim::Finite(0), CaseTag::NoPath));
    assert!(matches!(r.oracle, Some(OracleRecord::Skipped { .. })));
    let text = stdout(&["ext", g, "--source", "d:1/2x^2-1", "--target", "a:x^3-3x-1"]);
    assert!(text.contains("value       infinity"), "{text}");
    let out = run(&["ext", g, "--source", "d:x^2-1", "--target", "l:x^3-3x-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ext_table() {
    let g = fixture();
    let r: TableRecord = json(&[
        "ext-table",
        g.to_str().unwrap(),
        "--module",
        "d:1/2x^2-1",
        "--module",
        "l:x^3-3x-1",
        "--module",
        "d:x^3-3x-1",
    ]);
    use Dim::Finite;
    assert_eq!(r.cells, vec![
        vec![Finite(2), Finite(6), Finite(0)],
        vec![Finite(0), Finite(3), Finite(0)],
        vec![Finite(0), Finite(9), Finite(3)],
    ]);
}

#[test]
fn connectors() {
    let g = fixture();
    let g = g.to_str().unwrap();
    let r: ConnectorsRecord = json(&["connectors", g, "--source", "d", "--target", "l"]);
    assert_eq!(r.connectors, ConnectorsOut::Finite { paths: vec!["d1 d2 m n".into()] });
    let r: ConnectorsRecord = json(&["connectors", g, "--source", "d1 d2 d3 d4", "--target", "a"]);
    assert!(matches!(r.connectors, ConnectorsOut::Infinite { verified: true, .. }));
}

#[test]
fn actions() {
    let g = fixture();
    let g = g.to_str().unwrap();
    let act = |x: &str, w: &str| stdout(&["act", g, "--module", "d:1/2x^2-1", x, w]);
    assert_eq!(act("d1 d2 d3 d4", "[s1]"), "xbar * [s1]\n");
    assert_eq!(act("s1", "[s1]"), "[s1]\n");
    assert_eq!(act("1/2 d1 d2 d3 d4 d1 d2 d3 d4 - s1", "[s1]"), "0\n");
    let r: ActRecord = json(&["act", g, "--module", "l:x^3-3x-1", "l* l*", "[z]"]);
    assert_eq!(r.result, "(-3xbar^2+xbar+9) * [z]");
}

#[test]
fn verification_reports() {
    let g = fixture();
    let g = g.to_str().unwrap();
    let r: Report = json(&["verify", g, "--resolution", "--cycle", "d1 d2 d3 d4", "--poly", "1/2x^2-1", "-L", "3"]);
    assert_eq!(r.checks.len(), 3);
    assert!(r.checks.iter().all(|c| c.status == Status::Pass));
    let text = stdout(&["verify", g, "--lemma", "--cycle", "l", "--poly", "x^3-3x-1", "-L", "4"]);
    assert_eq!(text.matches("  PASS  ").count(), 2, "{text}");
    let r: Report = json(&["verify", g, "--resolution", "--cycle", "a", "--poly", "1", "-L", "2"]);
    assert!(r.passed());
    let out = run(&["verify", g, "--lemma", "--cycle", "l", "--poly", "x^3-3x-1", "-L", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncation 0"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "F4", "cycles", fixture().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let g = fixture();
    let args = ["ext-table", g.to_str().unwrap(), "--module", "d:1/2x^2-1", "--module", "a:x^3-3x-1", "--module", "g:x^3-3x-1"];
    let first = run(&args).stdout;
    for _ in 0..3 {
        assert_eq!(run(&args).stdout, first);
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS criterion")).count(), 8);
    let r: SelftestRecord = json(&["selftest"]);
    assert!(r.passed);
}
