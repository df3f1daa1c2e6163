use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ihg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihg")).args(args).output().expect("spawn ihg")
}

fn w4_args(section: &str) -> Vec<String> {
    vec![
        "--space".into(),
        fixture("w4_space.json").display().to_string(),
        "--quotient".into(),
        fixture("w4_quotient.json").display().to_string(),
        "--section".into(),
        fixture(section).display().to_string(),
    ]
}

fn run(command: &str, mut rest: Vec<String>, extra: &[&str]) -> Output {
    rest.extend(extra.iter().map(|s| s.to_string()));
    let mut args = vec![command];
    args.extend(rest.iter().map(String::as_str));
    ihg(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn digest(o: &Output) -> String {
    let text = stdout(o);
    let line = text.lines().find(|l| l.contains("inputs_digest")).expect("digest line");
    line.split('"').nth(3).unwrap().to_string()
}

#[test]
fn check_on_w4_passes_with_zero_slack() {
    let o = run("check", w4_args("w4_phi.json"), &["--L", "2", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\"verdict\": \"pass\""));
    assert!(out.contains("\"slack_min\": 0.0000000000000000e0"));
    assert!(out.contains("\"minimal_L\": 2.0000000000000000e0"));
}

#[test]
fn check_on_w4_fails_below_minimal_constant() {
    let o = run("check", w4_args("w4_phi.json"), &["--L", "1", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL intrinsic-holder"));
}

#[test]
fn alpha_out_of_range_is_an_input_error() {
    let o = run("check", w4_args("w4_phi.json"), &["--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("AlphaOutOfRange"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_input_error_naming_the_file() {
    let o = ihg(&["check", "--space", "/nonexistent/space.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/space.json"));
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("space.json");
    std::fs::write(&bad, "{ \"points\": [\"a\", ").unwrap();
    let o = ihg(&["validate", "--space", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(bad.to_str().unwrap()), "{}", stderr(&o));
}

#[test]
fn unknown_flag_is_an_input_error() {
    let o = ihg(&["check", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_triangle_violation_as_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("space.json");
    std::fs::write(&bad, r#"{"points":["a","b","c"],"dist":[[0,1,5],[1,0,1],[5,1,0]]}"#).unwrap();
    let o = ihg(&["validate", "--space", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("\"verdict\": \"fail\""));
}

#[test]
fn validate_accepts_w4() {
    let o = run("validate", w4_args("w4_phi.json"), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn relate_on_line4_names_strong_transitivity() {
    let f = |n: &str| fixture(n).display().to_string();
    let args = [
        "relate",
        "--space",
        &f("line4_space.json"),
        "--quotient",
        &f("line4_quotient.json"),
        "--section",
        &f("line4_phi.json"),
        "--section2",
        &f("line4_psi.json"),
        "--base-section",
        &f("line4_eta.json"),
        "--L",
        "1",
        "--alpha",
        "1",
    ];
    let o = ihg(&args);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("strong-transitivity"), "{}", stderr(&o));
}

#[test]
fn suite_passes_and_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let o = ihg(&["suite", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn digest_tracks_parameters_and_file_contents() {
    let base = digest(&run("check", w4_args("w4_phi.json"), &["--L", "2", "--alpha", "0.5"]));
    let again = digest(&run("check", w4_args("w4_phi.json"), &["--L", "2", "--alpha", "0.5"]));
    let other_l = digest(&run("check", w4_args("w4_phi.json"), &["--L", "3", "--alpha", "0.5"]));
    let other_section = digest(&run("check", w4_args("w4_psi.json"), &["--L", "2", "--alpha", "0.5"]));
    assert_eq!(base, again);
    assert_ne!(base, other_l);
    assert_ne!(base, other_section);

    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("phi.json");
    std::fs::copy(fixture("w4_phi.json"), &copy).unwrap();
    let mut args = w4_args("w4_phi.json");
    args[5] = copy.display().to_string();
    assert_eq!(digest(&run("check", args.clone(), &["--L", "2", "--alpha", "0.5"])), base);
    std::fs::write(&copy, format!("{}\n", std::fs::read_to_string(&copy).unwrap())).unwrap();
    assert_ne!(digest(&run("check", args, &["--L", "2", "--alpha", "0.5"])), base);
}

#[test]
fn regularity_csv_lists_the_mass_profile() {
    let f = |n: &str| fixture(n).display().to_string();
    let o = ihg(&[
        "regularity",
        "--space",
        &f("grid5_space.json"),
        "--quotient",
        &f("grid5_quotient.json"),
        "--section",
        &f("grid5_zero.json"),
        "--format",
        "csv",
    ]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("r,mass"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (r, m) = l.split_once(',').unwrap();
            (r.parse().unwrap(), m.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.windows(2).all(|w| w[0].1 <= w[1].1));
}

#[test]
fn text_format_prints_verdicts() {
    let o = run("check", w4_args("w4_phi.json"), &["--L", "2", "--alpha", "0.5", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("intrinsic-holder"));
}
