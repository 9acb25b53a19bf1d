//! End-to-end run of the standard verification suite at one degree.

use onesided::verify::{default_suite, reports_to_csv, run_theorem_suite};
use onesided::{QuadConfig, WeightedSpace};

#[test]
fn default_suite_passes_at_a_single_degree() {
    let members = default_suite().expect("suite construction");
    let space = WeightedSpace::unweighted(1.0, QuadConfig::default()).expect("space");
    let reports = run_theorem_suite(&members, &[8], &space);
    assert!(!reports.is_empty());
    let failures: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    assert!(
        failures.is_empty(),
        "failing checks:\n{}",
        reports_to_csv(&failures.into_iter().cloned().collect::<Vec<_>>())
    );
    // Every member reaches the pointwise checks and the oracle comparisons.
    for member in ["constant", "identity", "abs03", "sin10", "exp", "singular"] {
        for check in ["composite-sandwich", "oracle-dominance"] {
            assert!(
                reports.iter().any(|r| r.check_id == check && r.function_id == member),
                "missing {check} for {member}"
            );
        }
    }
    // Kernel checks run exactly for the absolutely continuous members.
    let kernel_runs = reports.iter().filter(|r| r.check_id == "kernel-sandwich").count();
    assert_eq!(kernel_runs, 5);
}
