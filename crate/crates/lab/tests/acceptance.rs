//! The acceptance gate: every criterion, one line each.

use std::io::Write;

use multicorn_lab::acceptance::{line, run_all};

#[test]
fn acceptance() {
    let results = run_all();
    // written to the raw stream so the table shows without --nocapture
    let mut err = std::io::stderr().lock();
    for r in &results {
        writeln!(err, "{}", line(r)).unwrap();
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    writeln!(err, "{}/{} criteria passed", results.len() - failed.len(), results.len()).unwrap();
    assert_eq!(results.len(), 12);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
