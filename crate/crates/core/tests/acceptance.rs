//! One line per acceptance criterion, then a single assertion over all of them.

use std::time::{Duration, Instant};

use preproj_core::selftest::{self, Check};

const SEED: u64 = 0;
const TRIALS: usize = 8;
const TIME_LIMIT: Duration = Duration::from_secs(60);

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut c = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            c.passed = false;
            c.detail = format!("{} (took {:.1}s, limit {}s)", c.detail, took.as_secs_f64(), limit.as_secs());
        }
    }
    c
}

#[test]
fn acceptance() {
    let mut checks = vec![
        timed(Some(TIME_LIMIT), || selftest::b2_table(SEED, TRIALS)),
        timed(None, || selftest::a2_products(SEED, TRIALS)),
        timed(Some(TIME_LIMIT), || selftest::leclerc_numbers(SEED, TRIALS)),
        timed(None, || selftest::ext_identities(SEED)),
        timed(None, || selftest::e_filtered_closure(SEED)),
        timed(None, || selftest::cancellation(SEED, TRIALS)),
        timed(None, || selftest::division(SEED, TRIALS)),
        timed(None, || selftest::symmetrizer_change(SEED, TRIALS)),
        timed(None, || selftest::dimension_formulas(SEED)),
    ];
    let first = selftest::run(SEED, TRIALS).to_json();
    let second = selftest::run(SEED, TRIALS).to_json();
    checks.push(Check {
        id: 10,
        name: "selftest determinism".into(),
        passed: first == second,
        detail: format!("two reports of {} bytes, identical: {}", first.len(), first == second),
    });
    for c in &checks {
        println!("criterion {:>2} {} {}: {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed: Vec<usize> = checks.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
