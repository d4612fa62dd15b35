use std::process::{Command, Output};

fn cvclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvclone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn fidelity_and_variance_text() {
    let out = cvclone(&["fidelity", "1", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0.666667 (2/3)\n");

    let out = cvclone(&["variance", "2", "4"]);
    assert_eq!(stdout(&out), "0.25 (1/4)\n");

    let out = cvclone(&["fidelity", "1", "inf"]);
    assert!(stdout(&out).starts_with("0.5"), "{}", stdout(&out));
}

#[test]
fn cascade_reports_match() {
    let out = cvclone(&["cascade", "1", "2", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("match true\n"), "{}", stdout(&out));
}

#[test]
fn table_csv_header_and_rows() {
    let out = cvclone(&["--format", "csv", "table", "3", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,variance,fidelity"));
    // rows for N=1..3 with N<=M<=5
    assert_eq!(lines.count(), 5 + 4 + 3);
}

#[test]
fn json_round_trips() {
    let out = cvclone(&["--format", "json", "fidelity", "2", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let f = v["fidelity"].as_f64().unwrap();
    assert_eq!(f, 6.0 / 7.0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["--format", "json", "table", "4", "6"][..],
        &[
            "--format",
            "csv",
            "verify-mc",
            "--samples",
            "20000",
            "--seed",
            "42",
        ][..],
    ] {
        let a = cvclone(args);
        let b = cvclone(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["fidelity", "0", "2"][..],
        &["fidelity", "3", "2"][..],
        &["cascade", "1", "3", "2"][..],
        &["fidelity", "one", "2"][..],
        &["nonsense"][..],
    ] {
        let out = cvclone(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_bounds_passes_and_absurd_tolerance_fails() {
    assert_eq!(cvclone(&["verify-bounds"]).status.code(), Some(0));
    let out = cvclone(&["verify-mc", "--samples", "20000", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(1));
}
