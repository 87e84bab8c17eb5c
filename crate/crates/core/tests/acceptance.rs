//! Runs the full verification suite and enforces both the verdicts and the
//! per-criterion time budgets. One line is printed per criterion; run with
//! `cargo test --test acceptance -- --nocapture` to watch them stream.

use relcp::suite::run_all;

#[test]
fn acceptance_criteria() {
    let results = run_all();
    assert_eq!(results.len(), 11, "the suite must cover every criterion");
    let mut failures = Vec::new();
    for r in &results {
        let ok = r.passed && r.within_bound();
        let status = if ok { "PASS" } else { "FAIL" };
        println!(
            "{status} {} [{:>9.3?} / {:?}] {}",
            r.name, r.elapsed, r.bound, r.detail
        );
        if !ok {
            let why = if r.passed { "exceeded its time bound" } else { "failed" };
            failures.push(format!("{} {}: {}", r.name, why, r.detail));
        }
    }
    assert!(failures.is_empty(), "criteria failed:\n{}", failures.join("\n"));
}
