#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs `floc` from the golden directory, so file arguments stay relative.
pub fn floc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floc"))
        .args(args)
        .current_dir(golden_dir())
        .env_remove("FLOC_CAP_ELEMENTS")
        .output()
        .expect("floc runs")
}

/// Golden JSON reports: file stem and arguments.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("check", &["--format", "json", "check", "demo.floc"]),
    ("check_canonical", &["--format", "json", "check", "--canonical", "demo.floc"]),
    ("analyze_S", &["--format", "json", "analyze", "demo.floc", "--frame", "S"]),
    ("analyze_V", &["--format", "json", "analyze", "demo.floc", "--frame", "V"]),
    ("points_B_G", &["--format", "json", "points", "demo.floc", "--frame", "B", "--joins", "G"]),
    ("coproduct_S_S", &["--format", "json", "coproduct", "demo.floc", "--left", "S", "--right", "S", "--verify-spatial"]),
    ("maps_S_B", &["--format", "json", "maps", "demo.floc", "--from", "S", "--to", "B"]),
    ("spec_Z12", &["--format", "json", "spec", "demo.floc", "--ring", "Z12"]),
];

/// Compares each golden report with a fresh run. With `UPDATE_GOLDEN` set the
/// files are rewritten instead. Returns the names that differ.
pub fn golden_mismatches() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for (name, args) in GOLDEN {
        let out = floc(args);
        let path = golden_dir().join(format!("{name}.json"));
        let got = String::from_utf8(out.stdout).expect("utf-8");
        if !out.status.success() {
            bad.push(format!("{name}: exit {:?}", out.status.code()));
            continue;
        }
        if update {
            std::fs::write(&path, &got).expect("write golden");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            _ => bad.push(name.to_string()),
        }
    }
    bad
}
