//! End-to-end checks of the binary: output round-trips, the exit-code
//! contract, and byte determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wrel::io::parse_relation;

fn wrel_cmd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrel"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn write_cube(dir: &Path) {
    fs::write(
        dir.join("cube.rel"),
        "A1,A2,A3,#weight\n0,0,0,1\n0,0,1,2\n0,1,0,3\n0,1,1,3\n\
         1,0,0,4\n1,0,1,4\n1,1,0,5\n1,1,1,6\n",
    )
    .unwrap();
}

#[test]
fn emitted_relations_reparse_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_cube(dir.path());

    let first = wrel_cmd(dir.path(), &["marg", "cube.rel", "--onto", "A1,A2"]);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout_of(&first);
    let reparsed = parse_relation(&text).expect("emitted relation reparses");
    assert_eq!(reparsed, parse_relation("A1,A2,#weight\n0,0,3\n0,1,6\n1,0,8\n1,1,11\n").unwrap());

    let second = wrel_cmd(dir.path(), &["marg", "cube.rel", "--onto", "A1,A2"]);
    assert_eq!(first.stdout, second.stdout);

    // The emitted file is accepted back as input.
    fs::write(dir.path().join("marginal.rel"), &text).unwrap();
    let inverse = wrel_cmd(dir.path(), &["inv", "marginal.rel"]);
    assert_eq!(inverse.status.code(), Some(0));
    assert_eq!(
        stdout_of(&inverse),
        "A1,A2,#weight\n0,0,1/3\n0,1,1/6\n1,0,1/8\n1,1,1/11\n"
    );
}

#[test]
fn verdicts_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_cube(dir.path());
    fs::write(
        dir.path().join("gap.rel"),
        "A,B,C,#weight\n0,0,1,1\n0,1,0,1\n",
    )
    .unwrap();

    let holds = wrel_cmd(dir.path(), &["check", "mvd", "cube.rel", "A1 ->> A2 | A3"]);
    assert_eq!(holds.status.code(), Some(0));
    assert_eq!(stdout_of(&holds), "A1 ->> A2 | A3: holds\n");

    let fails = wrel_cmd(dir.path(), &["check", "mvd", "gap.rel", "A ->> B | C"]);
    assert_eq!(fails.status.code(), Some(1));
    assert_eq!(stdout_of(&fails), "A ->> B | C: fails\n");

    let overlap = wrel_cmd(dir.path(), &["check", "mvd", "cube.rel", "A1 ->> A1 | A3"]);
    assert_eq!(overlap.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&overlap.stderr).contains("A1"));

    let misuse = wrel_cmd(
        dir.path(),
        &["check", "ci", "cube.rel", "A1 ->> A2 | A3", "--method", "counting"],
    );
    assert_eq!(misuse.status.code(), Some(2));

    let missing = wrel_cmd(dir.path(), &["check", "mvd", "nowhere.rel", "A ->> B | C"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nowhere.rel"));

    fs::write(dir.path().join("none.stmts"), "# no premises\n").unwrap();
    let oversized = wrel_cmd(
        dir.path(),
        &["witness", "none.stmts", "A,B,C,D,E,F,G ->> H | _"],
    );
    assert_eq!(oversized.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&oversized.stderr).contains("tuple space"));
}

#[test]
fn witness_search_reports_the_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("none.stmts"), "# no premises\n").unwrap();

    let found = wrel_cmd(dir.path(), &["witness", "none.stmts", "A ->> B | C"]);
    assert_eq!(found.status.code(), Some(1));
    assert_eq!(
        stdout_of(&found),
        "outcome: counterexample after 6 candidates\nA,B,C\n0,0,1\n0,1,0\n"
    );

    fs::write(dir.path().join("sym.stmts"), "A ->> B | C\n").unwrap();
    let swept = wrel_cmd(dir.path(), &["witness", "sym.stmts", "A ->> C | B"]);
    assert_eq!(swept.status.code(), Some(0));
    assert!(stdout_of(&swept).contains("246 candidates examined, space fully swept"));
}

#[test]
fn json_output_is_parseable_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("none.stmts"), "# no premises\n").unwrap();

    let args = ["witness", "none.stmts", "A ->> B | C", "--format", "json"];
    let first = wrel_cmd(dir.path(), &args);
    let second = wrel_cmd(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&first)).unwrap();
    assert_eq!(doc["outcome"], "counterexample");
    assert_eq!(doc["candidates_examined"], 6);
    assert_eq!(doc["counterexample"]["rows"][1], "0,1,0");
    assert!(doc.get("elapsed_ms").is_none());

    let timed = wrel_cmd(
        dir.path(),
        &["witness", "none.stmts", "A ->> B | C", "--format", "json", "--timings"],
    );
    let timed_doc: serde_json::Value = serde_json::from_str(&stdout_of(&timed)).unwrap();
    assert!(timed_doc.get("elapsed_ms").is_some());
}

#[test]
fn cover_and_derive_emit_their_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cycle.zemvd"),
        "Z: Z0\nX0a ->> X1a | Z0\nX1a ->> X2a | Z0\nX2a ->> X0a | Z0\n",
    )
    .unwrap();

    let covered = wrel_cmd(dir.path(), &["cover", "cycle.zemvd", "X0a ->> X2a | Z0"]);
    assert_eq!(covered.status.code(), Some(0));
    let text = stdout_of(&covered);
    assert!(text.starts_with("covered\n"));
    assert_eq!(text.matches("-(").count(), 5); // 2n-1 arcs for n = 3

    let derived = wrel_cmd(dir.path(), &["derive", "cycle.zemvd", "X1a ->> X0a | Z0"]);
    assert_eq!(derived.status.code(), Some(0));
    assert!(stdout_of(&derived).starts_with("derivable\ncover member: X1a ->> X0a | Z0\n"));

    fs::write(
        dir.path().join("chain.zemvd"),
        "Z: Z0\nX0a ->> X1a | Z0\nX1a ->> X2a | Z0\n",
    )
    .unwrap();
    let outside = wrel_cmd(dir.path(), &["cover", "chain.zemvd", "X1a ->> X0a | Z0"]);
    assert_eq!(outside.status.code(), Some(1));
    assert_eq!(stdout_of(&outside), "not covered\n");
}

#[test]
fn statement_file_errors_name_the_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.zemvd"),
        "Z: Z0\nX0a ->> X1a | Z0\nX1a ->> X2a | W\n",
    )
    .unwrap();

    let result = wrel_cmd(dir.path(), &["cover", "bad.zemvd", "X0a ->> X1a | Z0"]);
    assert_eq!(result.status.code(), Some(2));
    let diagnostics = String::from_utf8_lossy(&result.stderr);
    assert!(diagnostics.contains("bad.zemvd"), "stderr: {diagnostics}");
    assert!(diagnostics.contains("line 3"), "stderr: {diagnostics}");
}

#[test]
fn report_command_is_deterministic_and_flags_timing() {
    let dir = tempfile::tempdir().unwrap();
    let first = wrel_cmd(dir.path(), &["counterexample", "--n", "4"]);
    let second = wrel_cmd(dir.path(), &["counterexample", "--n", "4"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert!(text.contains("[PASS]"));
    assert!(!text.contains("ms"));

    let timed = wrel_cmd(dir.path(), &["counterexample", "--n", "4", "--timings"]);
    assert!(stdout_of(&timed).contains("ms"));
}
