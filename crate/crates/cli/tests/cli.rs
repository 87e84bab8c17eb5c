//! End-to-end tests for the `relcp` binary: verbs, exit codes, report
//! output and the `--out` / `--expect` flags.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn relcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn catalog_lists_groupoids_and_runs_the_suite() {
    let out = relcp(&["catalog"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("S3"));
    assert!(text.contains("Z6-disjoint-subgroups"));
    assert!(text.contains("PASS broadcast-dichotomy"));
    assert!(!text.contains("FAIL"), "every suite criterion passes");
    assert!(text.contains("verdict: pass"));
}

#[test]
fn validate_accepts_catalog_names_and_rejects_unknown_ones() {
    let out = relcp(&["validate", "--groupoid", "Z6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("morphisms: 6"));

    let out = relcp(&["validate", "--groupoid", "no-such-thing"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error:"));
    assert!(stderr(&out).contains("known names"));
}

#[test]
fn validate_distinguishes_bad_json_from_bad_structure() {
    let dir = tempfile::tempdir().unwrap();
    let garbled = write(dir.path(), "garbled.json", "{ not json");
    let out = relcp(&["validate", "--groupoid", &garbled]);
    assert_eq!(code(&out), 2, "unparseable input is an input error");

    // Parses but has a broken composition table: a check failure, not an
    // input error.
    let broken = write(
        dir.path(),
        "broken.json",
        r#"{ "kind": "group", "name": "B", "elements": ["e", "a"],
             "table": [[0, 1], [1, 1]] }"#,
    );
    let out = relcp(&["validate", "--groupoid", &broken]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("verdict: fail"));
}

#[test]
fn broadcast_splits_on_total_disconnectedness() {
    let out = relcp(&["broadcast", "--groupoid", "Z2+Z3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("broadcasting map"));

    let out = relcp(&["broadcast", "--groupoid", "indiscrete3"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("verdict: fail"));
}

#[test]
fn expect_flag_flips_exit_codes_without_touching_the_verdict() {
    let out = relcp(&["broadcast", "--groupoid", "indiscrete2", "--expect", "fail"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verdict: fail"), "verdict itself is unchanged");

    let out = relcp(&["broadcast", "--groupoid", "Z2", "--expect", "fail"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn frobenius_check_passes_on_catalog_groupoids() {
    let out = relcp(&["frobenius-check", "--groupoid", "S3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("commutative: false"));

    let out = relcp(&["frobenius-check", "--groupoid", "Z4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("commutative: true"));
}

#[test]
fn copyables_reports_counts() {
    let out = relcp(&["copyables", "--groupoid", "discrete2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("count: 2"), "one copyable state per point");

    let out = relcp(&["copyables", "--groupoid", "indiscrete2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("count: 0"));
    assert!(stdout(&out).contains("none"));
}

#[test]
fn witness_finds_entanglement_in_the_cup_state() {
    let dir = tempfile::tempdir().unwrap();
    let cup = write(
        dir.path(),
        "cup.json",
        r#"{ "left": { "kind": "indiscrete", "count": 2 },
             "right": { "kind": "indiscrete", "count": 2 },
             "state": [["0","0","0","0"], ["0","1","0","1"],
                       ["1","0","1","0"], ["1","1","1","1"]] }"#,
    );
    let out = relcp(&["witness", "--state", &cup]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("entangled"));

    let product = write(
        dir.path(),
        "product.json",
        r#"{ "left": { "kind": "group", "name": "Z2" },
             "right": { "kind": "group", "name": "Z2" },
             "state": [["0","0"], ["0","1"], ["1","0"], ["1","1"]] }"#,
    );
    let out = relcp(&["witness", "--state", &product]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("no violating pair"));
}

#[test]
fn measure_reports_causality() {
    let dir = tempfile::tempdir().unwrap();
    let causal = write(
        dir.path(),
        "causal.json",
        r#"{ "groupoid": { "kind": "group", "name": "Z2" },
             "parts": [["0"], ["1"]] }"#,
    );
    let out = relcp(&["measure", "--measurement", &causal]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("causal: true"));

    let partial = write(
        dir.path(),
        "partial.json",
        r#"{ "groupoid": { "kind": "group", "name": "Z4" },
             "parts": [["0", "2"]] }"#,
    );
    let out = relcp(&["measure", "--measurement", &partial]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("causal: false"));
}

#[test]
fn ki_splits_on_commutation() {
    let out = relcp(&["ki", "--triple", "Z6-disjoint-subgroups"]);
    assert_eq!(code(&out), 0);

    let out = relcp(&["ki", "--triple", "S3-noncommuting-subgroups"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("compose to"));

    let out = relcp(&["ki", "--triple", "no-such-triple"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("known:"));
}

#[test]
fn ns_with_causal_and_unrestricted_families() {
    let out = relcp(&["ns", "--triple", "discrete2-full"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("families: causal"));

    let out = relcp(&["ns", "--triple", "discrete2-full", "--no-causal"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("families: all"));
    assert!(stdout(&out).contains("measuring the"));
}

#[test]
fn ns_accepts_subsystem_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "subs.json",
        r#"{ "groupoid": { "kind": "group", "name": "Z6" },
             "left": ["0", "3"], "right": ["0", "2", "4"] }"#,
    );
    let out = relcp(&["ns", "--subsystems", &file]);
    assert_eq!(code(&out), 0);

    let out = relcp(&["ns"]);
    assert_eq!(code(&out), 2, "one of --subsystems or --triple is required");
}

#[test]
fn bitcommit_restricted_classes_are_binding() {
    for adversary in ["functions", "bijections", "isometries"] {
        let out = relcp(&["bitcommit", "--adversary", adversary]);
        assert_eq!(code(&out), 0, "{adversary} should be unable to cheat");
        assert!(stdout(&out).contains("verdict: pass"));
    }
}

#[test]
fn bitcommit_unrestricted_class_finds_a_cheat() {
    let out = relcp(&["bitcommit", "--adversary", "all"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("cheat"));
}

#[test]
fn bitcommit_budget_exhaustion_is_inconclusive() {
    let out = relcp(&["bitcommit", "--adversary", "all", "--budget", "3"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("verdict: inconclusive"));

    let out = relcp(&[
        "bitcommit", "--adversary", "all", "--budget", "3", "--expect", "inconclusive",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bitcommit_summary_passes_with_restricted_classes_bound() {
    let out = relcp(&["bitcommit"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("sound: true"));
    assert!(text.contains("concealing: true"));
    assert!(text.contains("all cp morphisms: cheat"));
}

#[test]
fn bitcommit_accepts_protocol_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "protocol.json",
        r#"{ "alice": { "kind": "indiscrete", "objects": ["0", "1", "2"] },
             "bob": { "kind": "indiscrete", "objects": ["x", "y"] },
             "heads": [["0", "x"], ["1", "y"], ["2", "y"]],
             "tails": [["0", "y"], ["1", "x"], ["2", "x"]] }"#,
    );
    let out = relcp(&["bitcommit", "--protocol", &file, "--adversary", "functions"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn fhilb_verify_accepts_diagonals_and_refuses_matrix_algebras() {
    let out = relcp(&["fhilb-verify", "--structure", "diagonal", "--dim", "4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("max marginal deviation"));

    let out = relcp(&["fhilb-verify", "--structure", "matrix", "--dim", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not commutative"));
}

#[test]
fn out_flag_writes_the_report_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = relcp(&["broadcast", "--groupoid", "Z3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed["check"], "broadcast");
    assert_eq!(parsed["verdict"], "pass");
    assert_eq!(parsed["inputs"]["groupoid"], "Z3");
    assert!(parsed["witness"].as_str().unwrap().contains("broadcasting map"));
}
