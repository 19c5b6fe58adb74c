use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epimorph"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn borel_answers_drive_exit_codes() {
    let f = problem("borel_sl2.json");
    let obs = run(&["check-observable", path_str(&f)]);
    assert_eq!(code(&obs), 1, "{}", stdout(&obs));
    assert!(stdout(&obs).contains("observability: No"));
    let epi = run(&["check-epimorphic", path_str(&f)]);
    assert_eq!(code(&epi), 0, "{}", stdout(&epi));
    assert!(stdout(&epi).contains("epimorphicity: Yes"));
}

#[test]
fn nilpotent_line_reports() {
    let f = problem("nilpotent_line_sl2.json");
    let out = run(&["--json", "check-observable", path_str(&f)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"]["answer"], "Yes");
    assert_eq!(v["verdict"]["confidence"], "exact");
    assert!(v["verdict"]["certificate"]["sukhanov"].is_object());
    assert_eq!(code(&run(&["check-epimorphic", path_str(&f)])), 1);
}

#[test]
fn structure_constant_input_agrees_with_classical_input() {
    let table = run(&["--json", "check-observable", path_str(&problem("sl2_table.json"))]);
    assert_eq!(code(&table), 0);
    assert_eq!(json(&table)["verdict"]["answer"], "Yes");
}

#[test]
fn json_output_is_deterministic() {
    let f = problem("borel_sl2.json");
    let args = ["--json", "--trace", "check-epimorphic", path_str(&f)];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn saved_reports_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let f = problem("nilpotent_line_sl2.json");
    let out = run(&["--json", "check-observable", path_str(&f)]);
    let report = dir.path().join("report.json");
    std::fs::write(&report, &out.stdout).unwrap();
    let ok = run(&["verify", report.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));

    let mut v = json(&out);
    v["verdict"]["certificate"]["sukhanov"]["s"] = serde_json::json!(["0", "-1", "0"]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify", bad.to_str().unwrap()])), 1);
}

#[test]
fn corpus_passes_and_verifies() {
    let out = run(&["--json", "--quiet", "corpus"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["cases"].as_array().unwrap().len() >= 12);
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("corpus.json");
    std::fs::write(&doc, &out.stdout).unwrap();
    assert_eq!(code(&run(&["verify", doc.to_str().unwrap()])), 0);
}

#[test]
fn grading_reports_containment() {
    let f = problem("nilpotent_line_sl2.json");
    let good = run(&["--json", "grading", path_str(&f), "--s", "0,1,0"]);
    assert_eq!(code(&good), 0);
    assert_eq!(json(&good)["containment"]["holds"], true);
    let bad = run(&["grading", path_str(&f), "--s", "0,-1,0"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn orthocent_needs_reductive_input() {
    let out = run(&["--json", "orthocent", path_str(&problem("cartan_sl2.json"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["orthogonal_centralizer"].as_array().unwrap().len(), 0);
    let err = run(&["orthocent", path_str(&problem("borel_sl2.json"))]);
    assert_eq!(code(&err), 13);
    assert!(String::from_utf8_lossy(&err.stderr).starts_with("error:"));
}

#[test]
fn failures_use_codes_above_ten() {
    assert_eq!(code(&run(&["no-such-command"])), 10);
    assert_eq!(code(&run(&["check-observable", "/nonexistent/problem.json"])), 11);

    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("not json", "{"),
        ("bad rational", r#"{"algebra":{"family":"sl","n":2},"subalgebra":{"basis":[["1/0",0,0]]}}"#),
        ("wrong length", r#"{"algebra":{"family":"sl","n":2},"subalgebra":{"basis":[[1,0]]}}"#),
        ("not closed", r#"{"algebra":{"family":"sl","n":2},"subalgebra":{"basis":[[1,0,0],[0,0,1]]}}"#),
        ("dependent", r#"{"algebra":{"family":"sl","n":2},"subalgebra":{"basis":[[1,0,0],[2,0,0]]}}"#),
    ];
    for (what, text) in cases {
        let f = dir.path().join("p.json");
        std::fs::write(&f, text).unwrap();
        let out = run(&["check-observable", f.to_str().unwrap()]);
        assert_eq!(code(&out), 12, "{what}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn no_color_disables_escapes() {
    let out = run(&["check-observable", path_str(&problem("borel_sl2.json"))]);
    assert!(!stdout(&out).contains('\x1b'));
}
