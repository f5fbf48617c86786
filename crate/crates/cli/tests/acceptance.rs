//! One line per acceptance criterion. Criteria 1 to 14 are suite checks on
//! the default corpus; 15 exercises the front end through the binary.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use finite_locales::report::Report;
use finite_locales::suite::{criterion, run_check, Ctx, SuiteOptions};
use finite_locales::Caps;

struct Line {
    n: u8,
    passed: bool,
    detail: String,
}

fn frontend(ctx: &Ctx) -> Line {
    let mut problems = Vec::new();
    let round_trip = run_check(ctx, criterion(15).expect("criterion 15 is registered")).expect("no cap");
    if !round_trip.passed {
        problems.push(format!("round trip: {}", round_trip.witness.unwrap_or_default()));
    }
    let golden = common::golden_mismatches();
    if !golden.is_empty() {
        problems.push(format!("golden files differ: {golden:?}"));
    }
    let start = Instant::now();
    let out = common::floc(&["--format", "json", "suite"]);
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    if out.status.code() != Some(0) {
        problems.push(format!("suite exited with {:?}", out.status.code()));
    }
    if elapsed > Duration::from_secs(120) {
        problems.push(format!("suite took {elapsed:?}"));
    }
    match Report::from_json(&text) {
        Ok(r) if r.to_json() == text => {}
        _ => problems.push("suite report does not round-trip".into()),
    }
    Line {
        n: 15,
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!(
                "corpus round trip ({} cases), {} golden reports, full suite in {:.1}s",
                round_trip.cases,
                common::GOLDEN.len(),
                elapsed.as_secs_f64()
            )
        } else {
            problems.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let caps = Caps::default();
    let ctx = Ctx::new(SuiteOptions::default(), &caps).expect("default corpus within caps");
    let mut lines = Vec::new();
    for n in 1..=14 {
        let check = criterion(n).expect("every criterion is registered");
        let r = run_check(&ctx, check).expect("default corpus within caps");
        let detail = match &r.witness {
            None => format!("{} ({} cases): {}", r.id, r.cases, r.title),
            Some(w) => format!("{}: {w}", r.id),
        };
        lines.push(Line {
            n,
            passed: r.passed,
            detail,
        });
    }
    lines.push(frontend(&ctx));
    let mut failed = 0;
    for l in &lines {
        println!("criterion {:>2} {} {}", l.n, if l.passed { "PASS" } else { "FAIL" }, l.detail);
        failed += usize::from(!l.passed);
    }
    println!("{} criteria, {failed} failed", lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
