//! End-to-end checks of the binary: exit codes, fixture analysis, the fan
//! file round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_toric")
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/paper-example.fan")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn validate_fixture() {
    let out = run(&["validate", fixture().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("valid fan with 8 rays"));
    assert!(text.contains("[-2, 0, -2, -1, -2, -2, -2, -1]"));
}

#[test]
fn validate_rejects_incomplete_fan() {
    let dir = std::env::temp_dir().join("toric-cli-test-incomplete");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("half.fan");
    std::fs::write(&path, "1 0\n0 1\n-1 1\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("do not cover the plane"), "stderr: {err}");
}

#[test]
fn validate_rejects_bad_line() {
    let dir = std::env::temp_dir().join("toric-cli-test-badline");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.fan");
    std::fs::write(&path, "1 0\n0 1 7\n-1 -1\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn analyze_fixture_reports_torsion_and_generated() {
    let out = run(&["analyze", fixture().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("GENERATED"), "{text}");
    assert!(text.contains("Z/2"), "{text}");

    let structured = run(&["analyze", fixture().to_str().unwrap(), "--format", "structured"]);
    let stext = stdout(&structured);
    assert!(stext.starts_with("toric-report/1"));
    assert!(stext.contains("conditions.c5.splits: false"));
    assert!(stext.contains("conditions.c5.torsion: 2"));
    assert!(stext.contains("conclusion: GENERATED"));
}

#[test]
fn analyze_hirzebruch_three_is_standard_only() {
    let dir = std::env::temp_dir().join("toric-cli-test-f3");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f3.fan");
    let constructed = run(&["construct", "--hirzebruch", "3", "--out", path.to_str().unwrap()]);
    assert!(constructed.status.success());
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("STANDARD_ONLY"));
}

#[test]
fn construct_roundtrips_bit_exactly() {
    let out = run(&["construct", "--chains", "1,1,3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let dir = std::env::temp_dir().join("toric-cli-test-rt");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chains.fan");
    std::fs::write(&path, &text).unwrap();
    let validated = run(&["validate", path.to_str().unwrap()]);
    assert!(validated.status.success());
    // Loading and re-dumping the same rays is bit-exact: construct with --out
    // then read back.
    let path2 = dir.join("chains2.fan");
    let again = run(&["construct", "--chains", "1,1,3", "--out", path2.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(std::fs::read_to_string(&path2).unwrap(), text);
}

#[test]
fn cohomology_of_minus_two_curve() {
    // Ray 1 of the fixture is a -2-curve: O(-C) has no cohomology.
    let out = run(&[
        "cohomology",
        fixture().to_str().unwrap(),
        "--divisor",
        "-1,0,0,0,0,0,0,0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("h0: 0") && text.contains("h1: 0") && text.contains("h2: 0"));

    let out = run(&["cohomology", fixture().to_str().unwrap(), "--divisor", "1,0,0,0,0,0,0,0"]);
    let text = stdout(&out);
    assert!(text.contains("h0: 1") && text.contains("h1: 1") && text.contains("h2: 0"));

    // Picard-basis spelling of the same class.
    let out = run(&[
        "cohomology",
        fixture().to_str().unwrap(),
        "--divisor",
        "pic:-1,-2,-1,0,1,2",
    ]);
    let text = stdout(&out);
    assert!(text.contains("h0: 0") && text.contains("h1: 0") && text.contains("h2: 0"));
}

#[test]
fn cohomology_rejects_wrong_length() {
    let out = run(&["cohomology", fixture().to_str().unwrap(), "--divisor", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn census_counts() {
    let out = run(&["census", "--max-rays", "5", "--bound", "2", "--fano"]);
    assert!(out.status.success());
    assert!(stdout(&out).trim_end().ends_with("classes: 4"));

    let out = run(&["census", "--max-rays", "6", "--bound", "2", "--fano"]);
    assert!(stdout(&out).trim_end().ends_with("classes: 5"));

    let out = run(&["census", "--max-rays", "3", "--bound", "2"]);
    assert!(stdout(&out).trim_end().ends_with("classes: 1"));
}

#[test]
fn minimal_model_of_fixture() {
    let out = run(&["minimal-model", fixture().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("base (4 rays):"));
    assert!(text.contains("trace (4 blow-ups"));
    assert!(text.trim_end().ends_with("replay: ok"));
}

#[test]
fn separation_search_is_empty() {
    let out = run(&["separation-search", "--alpha-bound", "4", "--length-bound", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "solutions: 0");
}

#[test]
fn ktheory_summary_and_euler() {
    let out = run(&["ktheory", fixture().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("k-lattice dimension: 8"));
    assert!(text.contains("relations hold"));
    assert!(!text.contains("FAIL"));

    // euler(O, O) = 1 on this surface: class (1, 0.., 1).
    let out = run(&[
        "ktheory",
        fixture().to_str().unwrap(),
        "--euler",
        "1,0,0,0,0,0,0,1",
        "1,0,0,0,0,0,0,1",
    ]);
    assert!(stdout(&out).contains("euler(x, y) = 1"));
}

#[test]
fn ktheory_presentation() {
    let out = run(&["ktheory", fixture().to_str().unwrap(), "--presentation", "1,0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("E' = pic:"));
    // O_C for the -2-ray D_1: class (0, [D_1], 1).
    assert!(text.contains("S  = 0,1,2,1,0,-1,-2,1"), "{text}");

    // A ray that is not a -2-curve is a user error.
    let out = run(&["ktheory", fixture().to_str().unwrap(), "--presentation", "4,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixture_contains_the_eight_rays_in_order() {
    let text = std::fs::read_to_string(fixture()).unwrap();
    let rays: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    assert_eq!(rays, vec!["1 0", "0 1", "-1 0", "-2 -1", "-1 -1", "0 -1", "1 -1", "2 -1"]);
}

#[test]
fn unknown_subcommand_is_a_user_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
