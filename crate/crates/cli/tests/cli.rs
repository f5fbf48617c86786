mod common;

use std::io::Write;
use std::process::Command;

use common::floc;
use finite_locales::report::Report;

fn temp(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".floc").tempfile().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], file: &tempfile::NamedTempFile) -> std::process::Output {
    let path = file.path().to_str().unwrap();
    let args: Vec<&str> = args.iter().map(|a| if *a == "FILE" { path } else { a }).collect();
    Command::new(env!("CARGO_BIN_EXE_floc"))
        .args(&args)
        .env_remove("FLOC_CAP_ELEMENTS")
        .output()
        .unwrap()
}

fn stderr(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn syntax_errors_exit_2_with_position() {
    let f = temp("frame S = chain 3\n\nposet P { a < }\n");
    let o = run(&["check", "FILE"], &f);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains(":3:15:"), "{e}");
    assert!(e.contains("expected"), "{e}");
}

#[test]
fn invalid_declarations_exit_2() {
    for src in [
        "frame S = chain 3\nframe B = boolean 2\nmap f : S -> B { s1 -> a }",
        "frame B = boolean 2\njoins J on B = only { e3 <- {e1} }",
        "frame F = downsets Nowhere",
        "frame F = chain 2\nframe F = chain 2",
    ] {
        let f = temp(src);
        assert_eq!(run(&["check", "FILE"], &f).status.code(), Some(2), "{src}");
    }
    let f = temp("frame F = chain 2");
    let o = run(&["analyze", "FILE", "--frame", "G"], &f);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn caps_exit_3_from_flag_and_environment() {
    let f = temp("frame B = boolean 3\nframe C = chain 3");
    assert_eq!(run(&["--cap-elements", "4", "check", "FILE"], &f).status.code(), Some(3));
    let path = f.path().to_str().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_floc"))
        .args(["check", path])
        .env("FLOC_CAP_ELEMENTS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("resource cap"));
    // 4-chain ⊕ 4-chain has 20 elements, over the square of the cap
    let o = run(&["--cap-elements", "4", "coproduct", "FILE", "--left", "C", "--right", "C"], &temp("frame C = chain 4"));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    // the full join family is capped separately
    let f = temp("frame C = chain 17\njoins J on C = full");
    assert_eq!(run(&["check", "FILE"], &f).status.code(), Some(3));
}

#[test]
fn suite_exit_codes() {
    let o = floc(&["suite", "--max-poset", "0", "--max-ring", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let o = floc(&["suite", "--max-poset", "1", "--max-ring", "0", "--inject-corrupted"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("FAIL"));
    assert!(text.contains("witness: corrupted:"), "{text}");
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let args = ["--format", "json", "analyze", "demo.floc", "--frame", "S"];
    let a = floc(&args).stdout;
    let b = floc(&args).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let r = Report::from_json(&text).unwrap();
    assert_eq!(r.to_json(), text);
    assert_eq!(r.command.name, "analyze");
}

#[test]
fn text_outputs() {
    let o = floc(&["points", "demo.floc", "--frame", "B", "--joins", "G"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("3 points of B"), "{text}");
    assert!(text.contains("{e3}"));
    let o = floc(&["spec", "demo.floc", "--ring", "Z12"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("2 points") && text.contains("discrete: true"), "{text}");
    let o = floc(&["check", "--canonical", "demo.floc"]);
    let text = String::from_utf8(o.stdout).unwrap();
    // frames declared through a space print as explicit orders
    assert!(text.contains("frame S = order { e0 e1 e2; e0 < e1; e1 < e2 }"), "{text}");
    let o = floc(&["maps", "demo.floc", "--from", "S", "--to", "B"]);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("4 frame maps"));
}

#[test]
fn canonical_output_is_a_fixed_point() {
    let once = floc(&["check", "--canonical", "demo.floc"]).stdout;
    let f = temp(std::str::from_utf8(&once).unwrap());
    let twice = run(&["check", "--canonical", "FILE"], &f).stdout;
    assert_eq!(once, twice);
}
