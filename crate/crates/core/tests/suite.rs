use finite_locales::suite::{run_suite, SuiteOptions};
use finite_locales::Caps;

#[test]
fn default_suite_passes() {
    let r = run_suite(SuiteOptions::default(), &Caps::default()).unwrap();
    for c in &r.checks {
        println!("{:<26} {:>8} {} {}", c.id, c.cases, if c.passed { "ok" } else { "FAIL" }, c.witness.as_deref().unwrap_or(""));
    }
    assert!(r.passed);
}
