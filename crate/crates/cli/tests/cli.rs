use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qmonogamy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_to_file(args: &[&str], path: &Path) -> (Output, String) {
    let mut all = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--output", p]);
    let out = run(&all);
    let text = std::fs::read_to_string(path).unwrap_or_default();
    (out, text)
}

fn parse_rows(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn row_at(rows: &[Vec<f64>], lambda: f64) -> &Vec<f64> {
    rows.iter()
        .find(|r| (r[0] - lambda).abs() < 1e-9)
        .expect("grid point")
}

#[test]
fn sweep_qmmi_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = run_to_file(&["sweep-qmmi"], &dir.path().join("a.csv"));
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_rows(&csv);
    assert_eq!(header, ["lambda", "DP1", "DP2", "DP3", "DP4", "M4"]);
    assert_eq!(rows.len(), 101);
    let r = row_at(&rows, 0.10);
    assert!(r[5] < 0.0);
    assert!(r[1..5].iter().all(|v| *v >= -1e-9));
    // Twelve significant digits in scientific notation.
    let first_value = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let mantissa = first_value
        .split('e')
        .next()
        .unwrap()
        .trim_start_matches('-');
    assert_eq!(mantissa.replace('.', "").len(), 12, "{first_value}");

    let (_, again) = run_to_file(&["sweep-qmmi"], &dir.path().join("b.csv"));
    assert_eq!(csv, again);
}

#[test]
fn sweep_mqmmi_region() {
    let out = run(&[
        "sweep-mqmmi",
        "--lambda-min",
        "0.35",
        "--lambda-max",
        "0.45",
        "--step",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["lambda", "M4_q1", "M4_q2", "M4_q3"]);
    assert_eq!(rows.len(), 3);
    let r = row_at(&rows, 0.40);
    assert!(r[1] >= -1e-9);
    assert!(r[2] < -1e-9 && r[3] < -1e-9);
}

#[test]
fn sweep_dpi_extra_nonnegative_and_deterministic() {
    let a = run(&["sweep-dpi-extra"]);
    let b = run(&["sweep-dpi-extra"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = parse_rows(&String::from_utf8(a.stdout).unwrap());
    assert_eq!(header, ["lambda", "DP5_markov", "DP5", "DP6", "DP7"]);
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r[1..].iter().all(|v| *v >= -1e-9)));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["sweep-qmmi", "--step", "0.05"];
    let one = bin()
        .args(args)
        .env("QMONOGAMY_THREADS", "1")
        .output()
        .unwrap();
    let many = bin()
        .args(args)
        .env("QMONOGAMY_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
    let bad = bin()
        .args(args)
        .env("QMONOGAMY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_and_svg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("plot.svg");
    let out = run(&[
        "sweep-qmmi",
        "--step",
        "0.1",
        "--format",
        "json",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    let chart = std::fs::read_to_string(svg).unwrap();
    assert!(chart.starts_with("<svg") && chart.contains("<polyline"));
}

#[test]
fn verify_four_states_passes() {
    let out = run(&[
        "verify",
        "--steps",
        "4",
        "--samples",
        "1000",
        "--format",
        "json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for n in [
        "M4",
        "ssa_min",
        "adjoint_identity_max_deviation",
        "cqmi_monotonicity_min",
        "classical_cmmi_min",
    ] {
        assert!(names.contains(&n), "missing {n}");
    }
}

#[test]
fn verify_eight_states_passes() {
    let out = run(&["verify", "--steps", "8", "--samples", "100"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // JSON is the default for verify.
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["steps"], 8);
}

#[test]
fn verify_with_user_channel() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("amp.json");
    // Amplitude damping with decay 0.3.
    std::fs::write(
        &good,
        r#"{"kraus": [{"re": [[1, 0], [0, 0.8366600265340756]]}, {"re": [[0, 0.5477225575051661], [0, 0]]}]}"#,
    )
    .unwrap();
    let out = run(&[
        "verify",
        "--samples",
        "20",
        "--format",
        "csv",
        "--channel",
        good.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("channel_chain_min"));

    let bad = dir.path().join("lossy.json");
    std::fs::write(&bad, r#"{"kraus": [{"re": [[1, 0], [0, 0.5]]}]}"#).unwrap();
    let out = run(&[
        "verify",
        "--samples",
        "20",
        "--channel",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("trace preserving"), "{err}");
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(run(&["verify", "--steps", "5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep-qmmi", "--lambda-max", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let out = run(&[
        "sweep-qmmi",
        "--step",
        "0.5",
        "--output",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let missing = run(&["verify", "--channel", "/nonexistent-dir/ch.json"]);
    assert_eq!(missing.status.code(), Some(2));
}
