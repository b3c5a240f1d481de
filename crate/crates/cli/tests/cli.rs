//! End-to-end tests of the `alphainfo` binary: exit codes, base
//! conversion, CSV shape, and sweep ordering.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphainfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bsc14_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{}", r#"{"pxy": [[0.375,0.125],[0.125,0.375]]}"#).unwrap();
    f
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.to_string())
        .collect()
}

#[test]
fn sibson_scalar_in_bits() {
    let f = bsc14_file();
    let out = run(&[
        "measure",
        "sibson",
        "--joint",
        f.path().to_str().unwrap(),
        "--alpha",
        "2",
        "--base",
        "2",
    ]);
    assert!(out.status.success());
    let v: f64 = stdout_lines(&out)[0].parse().unwrap();
    assert!((v - 1.25f64.log2()).abs() < 1e-12);
}

#[test]
fn base_two_is_base_e_over_ln2_bit_for_bit() {
    let f = bsc14_file();
    let path = f.path().to_str().unwrap().to_string();
    let args = |base: &str| {
        vec![
            "measure".to_string(),
            "sibson".to_string(),
            "--joint".to_string(),
            path.clone(),
            "--sweep".to_string(),
            "0.5:5:7".to_string(),
            "--base".to_string(),
            base.to_string(),
        ]
    };
    let nats = run(&args("e").iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let bits = run(&args("2").iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let nats_lines = stdout_lines(&nats);
    let bits_lines = stdout_lines(&bits);
    assert_eq!(nats_lines.len(), bits_lines.len());
    for (ln, lb) in nats_lines.iter().zip(&bits_lines).skip(1) {
        let vn: f64 = ln.split(',').nth(1).unwrap().parse().unwrap();
        let vb_str = lb.split(',').nth(1).unwrap();
        let expected = format!("{:.16e}", vn / std::f64::consts::LN_2);
        assert_eq!(vb_str, expected);
    }
}

#[test]
fn malformed_input_exits_one() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{}", r#"{"pxy": [[0.9, 0.3]]}"#).unwrap();
    let out = run(&[
        "measure",
        "sibson",
        "--joint",
        f.path().to_str().unwrap(),
        "--alpha",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn usage_error_exits_one_help_exits_zero() {
    let out = run(&["measure", "sibson", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bsc_example_matches_closed_form_column() {
    let out = run(&[
        "example",
        "bsc",
        "--eps",
        "0.25",
        "--sweep",
        "0.1:10:25",
        "--include-limits",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "alpha,sibson,closed_form");
    assert_eq!(lines.len(), 1 + 25 + 3);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        let generic: f64 = cells[1].parse().unwrap();
        let closed: f64 = cells[2].parse().unwrap();
        assert!((generic - closed).abs() < 1e-10, "{line}");
    }
}

#[test]
fn sweep_rows_are_alpha_ordered_under_threads() {
    let f = bsc14_file();
    let out = run(&[
        "measure",
        "arimoto",
        "--joint",
        f.path().to_str().unwrap(),
        "--sweep",
        "0.2:8:40",
        "--threads",
        "4",
    ]);
    assert!(out.status.success());
    let alphas: Vec<f64> = stdout_lines(&out)[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(alphas.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn check_suites_pass_and_exit_zero() {
    let out = run(&["check", "properties", "--instances", "20", "--seed", "11"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("PASS") && !text.contains("FAIL"));
}

#[test]
fn capacity_csv_and_out_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{}", r#"{"px":[0.5,0.5],"pygx":[[0.9,0.1],[0.2,0.8]]}"#).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("cap.csv");
    let out = run(&[
        "capacity",
        "sibson",
        "--channel",
        f.path().to_str().unwrap(),
        "--alpha",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("alpha,capacity,gap,iterations"));
    assert_eq!(text.lines().count(), 2);
}
