mod common;

#[test]
fn reports_match_golden_files() {
    let bad = common::golden_mismatches();
    assert!(bad.is_empty(), "golden mismatches: {bad:?}");
}
