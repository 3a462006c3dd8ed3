//! Behavioral tests for the command-line compiler: outputs, diagnostics,
//! and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_str()
        .unwrap()
        .to_owned()
}

fn pulsegraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pulsegraph"))
        .args(args)
        .output()
        .expect("spawn pulsegraph")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn render_emits_one_row_per_sample() {
    let out = pulsegraph(&["render", &data("sine_03us.json"), "--rate", "1e9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 301, "header plus 300 samples");
    assert_eq!(lines[0], "index,time_s,value");
    assert_eq!(lines[1], "0,0.00000000000e0,0.00000000e0");
    // Sample 25 is the quarter-period peak of the 10 MHz tone.
    assert!(lines[26].starts_with("25,2.50000000000e-8,1."));
}

#[test]
fn compile_dds_emits_segments() {
    let out = pulsegraph(&["compile", &data("seq_sine_zero.json"), "--target", "dds"]);
    assert!(out.status.success());
    let segments: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let segments = segments.as_array().unwrap();
    assert_eq!(segments.len(), 2);
    assert_eq!(segments[0]["frequency_hz"], 1e6);
    assert_eq!(segments[0]["amplitude"], 0.5);
    assert_eq!(segments[1]["amplitude"], 0.0);
    assert_eq!(segments[0]["phase_mode"], "absolute");
}

#[test]
fn schedule_compile_writes_per_channel_segments() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ms.json");
    let out = pulsegraph(&[
        "compile",
        &data("schedule_msgate.json"),
        "--target",
        "dds",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let spin: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("ms.spin-spin.json")).unwrap(),
    )
    .unwrap();
    let spin = spin.as_array().unwrap();
    assert_eq!(spin.len(), 3, "three spin tones");
    assert!(spin.iter().all(|s| s["phase_mode"] == "continuous"));
    assert_eq!(spin[0]["ref_phase_rad"], 0.0);

    let motion: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("ms.motion-motion.json")).unwrap(),
    )
    .unwrap();
    let motion = motion.as_array().unwrap();
    assert_eq!(motion.len(), 3, "pad, pulse, pad");
    assert_eq!(motion[0]["amplitude"], 0.0);
    assert_eq!(motion[1]["phase_mode"], "absolute");
    assert_eq!(motion[2]["amplitude"], 0.0);
}

#[test]
fn validate_reports_the_negative_pad() {
    // d = 80 ns against a 50 ns target: the inserted zero pad goes negative.
    let out = pulsegraph(&[
        "validate",
        &data("schedule_overflow.json"),
        "--bind",
        "d=80e-9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "exactly one violation");
    assert!(text.contains("channel drive (c1)"), "{text}");
    assert!(text.contains("Zero"), "{text}");
    assert!(text.contains("-3.00000e-8"), "{text}");

    // Bound within the target, the schedule is realizable.
    let ok = pulsegraph(&[
        "validate",
        &data("schedule_overflow.json"),
        "--bind",
        "d=30e-9",
    ]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok).trim(), "ok");
}

#[test]
fn unbound_variables_fail_the_default_pipeline() {
    let out = pulsegraph(&["render", &data("schedule_overflow.json"), "--rate", "1e9"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stderr(&out);
    assert!(text.contains("validate"), "{text}");
    assert!(text.contains("unbound variable"), "{text}");
    assert!(text.contains("channel drive"), "{text}");
}

#[test]
fn parse_errors_name_the_offending_path() {
    let out = pulsegraph(&["dot", &data("bad_kind.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stderr(&out);
    assert!(text.contains("/items/0"), "{text}");
    assert!(text.contains("Sin"), "{text}");
}

#[test]
fn unsupported_waveforms_fail_dds_lowering() {
    let out = pulsegraph(&[
        "compile",
        &data("unsupported_dds.json"),
        "--target",
        "dds",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stderr(&out);
    assert!(text.contains("unsupported waveform"), "{text}");
}

#[test]
fn unknown_passes_are_rejected() {
    let out = pulsegraph(&[
        "render",
        &data("sine_03us.json"),
        "--rate",
        "1e9",
        "--passes",
        "substitute,optimize",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("optimize"));
}

#[test]
fn schedules_require_an_output_path() {
    let out = pulsegraph(&[
        "compile",
        &data("schedule_msgate.json"),
        "--target",
        "dds",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--out"));
}

#[test]
fn version_reports_the_schema() {
    let out = pulsegraph(&["--version"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("schema 1"));
}

#[test]
fn rate_must_be_positive() {
    let out = pulsegraph(&["render", &data("sine_03us.json"), "--rate", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("positive"));
}

#[test]
fn dot_flag_writes_the_post_pass_graph() {
    let dir = tempfile::tempdir().unwrap();
    let dot_path: PathBuf = dir.path().join("g.dot");
    let out = pulsegraph(&[
        "render",
        &data("sine_03us.json"),
        "--rate",
        "1e9",
        "--dot",
        dot_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph pulse {"));
    assert!(dot.contains("Sine"));
}
