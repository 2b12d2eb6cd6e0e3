//! Behavioural tests of the `risim` binary: output shapes, exit codes,
//! error-path cleanliness, and file handling.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_risim")
}

fn table1() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/table1.json")
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().unwrap()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn boundary_prints_expected_distances() {
    let output = run(&["boundary", "--scene", &table1()]);
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), "6.25 m\n");

    let output = run(&[
        "boundary",
        "--scene",
        &table1(),
        "--convention",
        "as-printed",
    ]);
    assert_eq!(stdout_of(&output), "120.93 m\n");
}

#[test]
fn fit_phase_recovers_synthetic_constants() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("phase.csv");
    std::fs::write(
        &data,
        "theta_deg,sigma_m2,phase_deg\n0,,270\n60,,225\n90,,180\n",
    )
    .unwrap();
    let output = run(&["fit", "--data", data.to_str().unwrap(), "--target", "phase"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("a = 90.000°, b = 180.000°"), "{text}");
}

#[test]
fn fit_rcs_requires_scene() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("rcs.csv");
    std::fs::write(&data, "theta_deg,sigma_m2,phase_deg\n0,1.156466e-4,\n").unwrap();
    let output = run(&["fit", "--data", data.to_str().unwrap(), "--target", "rcs"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.contains("--scene"), "{stderr}");
}

#[test]
fn sweep_writes_exact_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let output = run(&[
        "sweep",
        "--scene",
        &table1(),
        "--param",
        "theta2",
        "--from",
        "0",
        "--to",
        "60",
        "--steps",
        "2",
        "--config",
        "continuous-aligned",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    assert_eq!(lines[0], "param,value,proposed_db,specular_db");
    assert!(lines[1].starts_with("theta2,0"));
    assert!(lines[2].starts_with("theta2,60"));
    assert!(text.ends_with('\n'));
    // No leftover temporary file.
    assert!(!dir.path().join("out.csv.tmp").exists());
}

#[test]
fn sweep_models_column_selection() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spec.csv");
    let output = run(&[
        "sweep",
        "--scene",
        &table1(),
        "--param",
        "d2",
        "--from",
        "1",
        "--to",
        "3",
        "--steps",
        "3",
        "--models",
        "specular",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("param,value,specular_db\n"), "{text}");
}

#[test]
fn plot_flag_does_not_change_csv() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.csv");
    let with_plot = dir.path().join("plot.csv");
    let svg = dir.path().join("plot.svg");
    let base = [
        "sweep",
        "--scene",
        &*Box::leak(table1().into_boxed_str()),
        "--param",
        "d1",
        "--from",
        "1",
        "--to",
        "3",
        "--steps",
        "3",
        "--config",
        "all-zero",
    ];
    let output = run(&[&base[..], &["--out", plain.to_str().unwrap()]].concat());
    assert!(output.status.success());
    let output = run(&[
        &base[..],
        &[
            "--out",
            with_plot.to_str().unwrap(),
            "--plot",
            svg.to_str().unwrap(),
        ],
    ]
    .concat());
    assert!(output.status.success());
    assert_eq!(
        std::fs::read(&plain).unwrap(),
        std::fs::read(&with_plot).unwrap()
    );
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.trim_end().ends_with("</svg>"));
}

#[test]
fn configure_exports_full_state_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("states.csv");
    let output = run(&[
        "configure",
        "--scene",
        &table1(),
        "--out",
        csv.to_str().unwrap(),
        "--scan",
        "16",
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 20);
    for line in &lines {
        assert_eq!(line.split(',').count(), 55);
        assert!(line.split(',').all(|f| f == "0" || f == "1"));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let output = run(&["sweep", "--scene", &table1(), "--param", "bogus"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["no-such-command"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_with_one_and_single_line() {
    // Missing scene file.
    let output = run(&["boundary", "--scene", "/nonexistent/scene.json"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("error: "));

    // Invalid scene content names the offending key.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(table1())
        .unwrap()
        .replace("\"theta_deg\": 30.0", "\"theta_deg\": 95.0");
    std::fs::write(&bad, text).unwrap();
    let output = run(&["eval", "--scene", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    assert!(stderr.contains("rx.theta_deg"), "{stderr}");
}

#[test]
fn failed_sweep_leaves_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("never.csv");
    let output = run(&[
        "sweep",
        "--scene",
        &table1(),
        "--param",
        "d1",
        "--from",
        "5",
        "--to",
        "1", // invalid: from >= to
        "--steps",
        "5",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(!csv.exists());
    assert!(!dir.path().join("never.csv.tmp").exists());
}

#[test]
fn eval_reports_consistent_configurations() {
    let zero = run(&["eval", "--scene", &table1(), "--config", "all-zero"]);
    assert!(zero.status.success());
    let one_bit = run(&["eval", "--scene", &table1(), "--config", "one-bit"]);
    assert!(one_bit.status.success());
    let grab = |out: &Output| -> f64 {
        stdout_of(out)
            .lines()
            .find(|l| l.starts_with("received power:"))
            .unwrap()
            .split_whitespace()
            .nth(2)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(grab(&one_bit) >= grab(&zero));
}

#[test]
fn missing_key_error_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing.json");
    let text = std::fs::read_to_string(Path::new(&table1()))
        .unwrap()
        .replace("\"rows\": 20,", "");
    std::fs::write(&bad, text).unwrap();
    let output = run(&["boundary", "--scene", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("rows"), "{stderr}");
}
