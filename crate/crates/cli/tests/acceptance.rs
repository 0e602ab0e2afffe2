//! End-to-end acceptance run: every suite at default settings, one line per
//! criterion. All comparisons are exact.
//!
//! Two criteria are known to fail and are asserted to fail, so that a change
//! in either direction is noticed:
//!
//! - 2: the recomputed X21 action of w_α0 also exchanges E14↔E15, E16↔E17
//!   and E18↔E19, which the tabulated matrix leaves fixed;
//! - 5: both slot choices fix E11..E21, so (a) does not single one out, and
//!   with the Kac formula as displayed T_α0² differs from T_−α1⋯T_−α5 (d).
//!
//! The suites also report the resolution of the slot (w_κ∞, from (a) and (b)
//! together) and the general Kac formula, which satisfies (d).

use std::collections::BTreeMap;

use garnier::{verify, RunConfig, Suite};

const EXPECTED_FAILURES: [u32; 2] = [2, 5];

fn main() {
    let config = RunConfig::default();
    let report = verify(&config, &Suite::ALL);

    let mut by_criterion: BTreeMap<u32, Vec<&garnier::Check>> = BTreeMap::new();
    for c in &report.checks {
        if let Some(n) = c.criterion {
            by_criterion.entry(n).or_default().push(c);
        }
    }

    let mut failing = Vec::new();
    for n in 1..=11 {
        let checks = by_criterion.get(&n).map(Vec::as_slice).unwrap_or(&[]);
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let ok = !checks.is_empty() && failed.is_empty();
        println!(
            "criterion {n:>2}: {}  ({} checks{})",
            if ok { "PASS" } else { "FAIL" },
            checks.len(),
            if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
        );
        if !ok {
            failing.push(n);
        }
    }
    for c in report.checks.iter().filter(|c| c.criterion.is_none()) {
        println!("supplementary: {}  {}/{}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name);
    }

    assert_eq!(failing, EXPECTED_FAILURES, "the failing criteria changed");

    // the known failures are exactly the documented ones
    let c2: Vec<&str> = by_criterion[&2].iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert_eq!(c2, ["X21/wa0"]);
    let c5: Vec<&str> = by_criterion[&5].iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert_eq!(c5, ["exactly one slot fixes E11..E21 (tabulated X21 matrices)", "T_alpha0^2 equals T_-alpha1 ... T_-alpha5"]);
    let resolved = report
        .checks
        .iter()
        .find(|c| c.name == "slot resolution: block fixed and restriction is T_alpha1 (tabulated X21 matrices)")
        .expect("reported");
    assert!(resolved.passed);
    assert_eq!(resolved.actual, serde_json::json!(["w_κ∞"]));
    let general = report
        .checks
        .iter()
        .find(|c| c.name == "T_alpha0^2 (general Kac formula) equals T_-alpha1 ... T_-alpha5")
        .expect("reported");
    assert!(general.passed);
    println!("acceptance: failing criteria are exactly the documented ones {EXPECTED_FAILURES:?}");
}
