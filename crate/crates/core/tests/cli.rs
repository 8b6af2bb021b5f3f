use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unruh-qfi")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let output = run(args);
    assert!(output.status.success(), "{args:?}: {}", String::from_utf8_lossy(&output.stderr));
    String::from_utf8(output.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn fisher_reports_closed_form_value() {
    let v = json(&["fisher", "--r", "pi/8", "--theta", "pi/3", "--phi", "pi/4"]);
    let expected = std::f64::consts::FRAC_PI_8.cos().powi(2);
    assert!((v["value"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert_eq!(v["param"], "theta");
    assert_eq!(v["mode"], "normalized");
    assert_eq!(v["pure_branch_taken"], false);
}

#[test]
fn fisher_as_published_at_inertial_limit() {
    let v = json(&["fisher", "--r", "0", "--theta", "1", "--phi", "2", "--norm", "as-published"]);
    assert!((v["value"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
}

#[test]
fn fisher_accepts_acceleration_instead_of_r() {
    let v = json(&["fisher", "--omega", "1", "--accel", "0", "--theta", "1", "--phi", "0"]);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["point"]["r"], 0.0);
}

#[test]
fn teleport_branch_has_quarter_probability() {
    let v = json(&["teleport", "--preset", "werner", "--fidelity", "0.9", "--r", "pi/8", "--theta", "1", "--phi", "1", "--format", "json"]);
    assert!((v["outcome_prob"].as_f64().unwrap() - 0.25).abs() < 1e-15);
}

#[test]
fn channel_text_lists_coefficients() {
    let text = stdout(&["channel", "--preset", "bell-psi-minus", "--r", "pi/4"]);
    assert!(text.contains("bell-psi-minus"));
    assert!(text.contains("physical        true"));
}

#[test]
fn two_point_sweep_csv_has_three_lines() {
    let text = stdout(&["sweep", "--axis", "r=0:pi/4:2", "--theta", "pi/2", "--phi", "0"]);
    assert!(text.ends_with('\n'));
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "r,fisher,pure_branch");
    assert!(lines[1].starts_with("0.0000000000000000e0,"));
    assert!(lines[2].starts_with("7.8539816339744828e-1,"));
}

#[test]
fn sweep_spec_file_reproduces_emission() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    stdout(&[
        "sweep", "--axis", "theta=0:pi:4", "--axis", "phi=0:2pi:3", "--r", "pi/8", "--preset", "x-state",
        "--param", "phi", "--format", "json", "--out", first.to_str().unwrap(),
    ]);
    let emitted = std::fs::read_to_string(&first).unwrap();
    let again = stdout(&["sweep", "--spec", first.to_str().unwrap(), "--format", "json"]);
    assert_eq!(emitted, again);
    let v: Value = serde_json::from_str(&emitted).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    assert!(v["spec"]["resolved"]["coefficients"].is_object());
}

#[test]
fn figure_json_records_resolved_channel() {
    let v = json(&["figures", "--id", "3c", "--grid", "3", "--format", "json"]);
    assert_eq!(v["spec"]["mode"], "as-published");
    assert_eq!(v["spec"]["channel"]["preset"], "x-state");
    assert_eq!(v["spec"]["resolved"]["dyadic"]["c33"], -0.7);
    assert!(v["spec"]["resolved"]["coefficients"]["b1"].is_array());
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn figures_all_writes_every_panel() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["figures", "--grid", "2", "--out", dir.path().to_str().unwrap()]);
    let mut names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 16);
    assert!(names.contains(&"fig6d.csv".to_string()));
}

#[test]
fn verify_report_has_six_sections_and_passes() {
    let text = stdout(&["verify", "--trials", "1", "--seed", "9"]);
    for section in ["(a)", "(b)", "(c)", "(d)", "(e)", "(f)"] {
        assert!(text.contains(section), "missing {section}");
    }
    assert!(text.lines().last().unwrap().starts_with("result: PASS"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["fisher", "--r", "1", "--theta", "0", "--phi", "0"]), 1);
    assert_eq!(code(&["fisher", "--preset", "x-state", "--c11", "1", "--c22", "1", "--c33", "1"]), 1);
    assert_eq!(code(&["teleport", "--preset", "x-state", "--c11", "1", "--c22", "1", "--c33", "1"]), 1);
    assert_eq!(code(&["fisher", "--bogus"]), 1);
    assert_eq!(code(&["verify", "--trials", "20", "--inject-b7-misprint"]), 2);
    assert_eq!(code(&["figures", "--id", "1a", "--grid", "2", "--out", "/nonexistent/dir/out.csv"]), 3);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = |threads: &'static str| ["--threads", threads, "figures", "--id", "5a", "--grid", "12"];
    assert_eq!(stdout(&args("1")), stdout(&args("3")));
}
