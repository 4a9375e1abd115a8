//! The default verification workload: all four families at K in
//! {2, 3, 10, 50} with 10^5 moment samples each must pass and finish within
//! a minute.

use std::time::Instant;

use congauss::diagnostics::default_suite;

#[test]
fn default_suite_passes_within_budget() {
    let start = Instant::now();
    let reports = default_suite(7, 100_000).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(reports.len(), 16);
    for report in &reports {
        assert!(
            report.all_passed(),
            "{}: {}",
            report.family_or_system,
            report.to_json()
        );
    }
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "default suite took {elapsed:?}, budget is 60 s"
    );
    println!("default suite: 16 reports, all checks passed in {elapsed:.2?}");
}
