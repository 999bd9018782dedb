//! Acceptance suite: runs every named validation check at its pinned
//! tolerance and prints one line per criterion.
//!
//! Run with `cargo test -p fracwalk-core --test acceptance -- --nocapture`
//! to see the per-assertion report lines.
//!
//! Criterion 3 carries a documented mathematical caveat: at beta = 0.3
//! the leading power-law asymptotes deviate from the exact values by
//! 7.7% (survival) and 16.2% (density) at t = 1e3 - a property of the
//! functions themselves, independently cross-checked against 450-digit
//! arithmetic - so its 1% band cannot be met there by any implementation
//! and the check fails honestly.  See NOTES in the repository root.

use fracwalk_core::validate::{checks, CheckContext, CheckOutcome};

const SEED: u64 = 20260810;

fn run(criterion: usize) -> CheckOutcome {
    let def = checks()
        .into_iter()
        .find(|c| c.criterion == criterion)
        .expect("criterion registered");
    let ctx = CheckContext { seed: SEED };
    let outcome = (def.run)(&ctx).expect("check ran to completion");
    let status = if outcome.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {:2} [{status}] {} ({} assertions)",
        criterion,
        outcome.name,
        outcome.lines.len()
    );
    for line in &outcome.lines {
        println!(
            "      [{}] {}",
            if line.passed { "ok" } else { "FAIL" },
            line.label
        );
    }
    outcome
}

fn assert_passed(criterion: usize) {
    let outcome = run(criterion);
    assert!(
        outcome.passed,
        "criterion {criterion} ({}) failed:\n{}",
        outcome.name,
        outcome
            .lines
            .iter()
            .filter(|l| !l.passed)
            .map(|l| l.label.clone())
            .collect::<Vec<_>>()
            .join("\n")
    );
}

#[test]
fn criterion_01_mittag_leffler_oracle() {
    assert_passed(1);
}

#[test]
fn criterion_02_laplace_pairs() {
    assert_passed(2);
}

#[test]
fn criterion_03_asymptotics() {
    assert_passed(3);
}

#[test]
fn criterion_04_thinning_universality() {
    assert_passed(4);
}

#[test]
fn criterion_05_respeed_invariance() {
    assert_passed(5);
}

#[test]
fn criterion_06_montroll_weiss() {
    assert_passed(6);
}

#[test]
fn criterion_07_diffusion_limit_gap() {
    assert_passed(7);
}

#[test]
fn criterion_08_subdiffusive_variance() {
    assert_passed(8);
}

#[test]
fn criterion_09_charfn_limit() {
    assert_passed(9);
}

#[test]
fn criterion_10_subordinator_identities() {
    assert_passed(10);
}

#[test]
fn criterion_11_route_triangle() {
    assert_passed(11);
}

#[test]
fn criterion_12_degeneracies() {
    assert_passed(12);
}

#[test]
fn criterion_13_fractional_poisson_pmf() {
    assert_passed(13);
}
