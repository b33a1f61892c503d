//! End-to-end runs of the installed binary: reproducibility of the JSON
//! manifest, determinism of the emitted bytes, error-row serialization, and
//! the documented exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_photonstats"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("photonstats-cli-e2e");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary must spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn manifest_reproduces_the_identical_table() {
    let json_path = scratch("first.json");
    let first = run(&[
        "com-sweep",
        "--points",
        "4",
        "--start",
        "40",
        "--stop",
        "60",
        "--outputs",
        "nbar_ana,g2_ana",
        "--format",
        "json",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert!(first.status.success(), "{first:?}");
    let first_bytes = std::fs::read(&json_path).unwrap();

    // Re-run purely from the produced document: identical bytes out.
    let second_path = scratch("second.json");
    let second = run(&[
        "com-sweep",
        "--config",
        json_path.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        second_path.to_str().unwrap(),
    ]);
    assert!(second.status.success(), "{second:?}");
    let second_bytes = std::fs::read(&second_path).unwrap();
    assert_eq!(first_bytes, second_bytes);
}

#[test]
fn thread_count_does_not_change_the_bytes() {
    let args = [
        "jc-sweep",
        "--points",
        "5",
        "--start",
        "-60",
        "--stop",
        "-40",
        "--outputs",
        "nbar_num,g2_num,nbar_ana,g2_ana",
        "--photon-cutoff",
        "2",
    ];
    let one = bin()
        .args(args)
        .env("PHOTONSTATS_THREADS", "1")
        .output()
        .unwrap();
    let four = bin()
        .args(args)
        .env("PHOTONSTATS_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let text = stdout_of(&one);
    assert_eq!(text.trim_end().lines().count(), 6); // header + 5 rows
}

#[test]
fn validation_errors_exit_with_code_two() {
    let bad_rate = run(&["jc-sweep", "--gamma", "-1"]);
    assert_eq!(bad_rate.status.code(), Some(2), "{bad_rate:?}");
    assert!(String::from_utf8_lossy(&bad_rate.stderr).contains("error"));

    let bad_preset = run(&["preset", "fig9z"]);
    assert_eq!(bad_preset.status.code(), Some(2));

    let bad_combo = run(&["com-sweep", "--variable", "delta_c"]);
    assert_eq!(bad_combo.status.code(), Some(2));

    let config = scratch("unknown-key.json");
    std::fs::write(&config, r#"{"omegga": 1.0}"#).unwrap();
    let bad_key = run(&["jc-sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(bad_key.status.code(), Some(2));
}

#[test]
fn failed_rows_exit_three_but_write_the_table() {
    let out_path = scratch("partial.csv");
    let out = run(&[
        "com-sweep",
        "--variable",
        "gamma",
        "--start",
        "-0.5",
        "--stop",
        "0.5",
        "--points",
        "3",
        "--outputs",
        "nbar_ana",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    let table = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = table.trim_end().lines().collect();
    assert_eq!(lines.len(), 4); // header + 3 rows, failures included
    assert!(lines[1].contains("invalid input") || lines[1].contains("error"));
    // The healthy point carries its value.
    assert!(lines[3].split(',').nth(3).unwrap().contains('e'));
}

#[test]
fn csv_header_names_every_column() {
    let out = run(&[
        "jc-sweep",
        "--points",
        "2",
        "--start",
        "-10",
        "--stop",
        "10",
        "--outputs",
        "g2_ana",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "delta_c,nbar_num,g2_num,nbar_ana,g2_ana,steady_residual,truncation_delta,error"
    );
}

#[test]
fn delay_command_emits_both_routes() {
    let out = run(&[
        "g2tau",
        "--omega",
        "0.5",
        "--photon-cutoff",
        "2",
        "--phonon-cutoff",
        "2",
        "--tau-points",
        "5",
        "--tau-max",
        "1.0",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("tau,"));
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert!(!cells[2].is_empty(), "regression value in {line}");
        assert!(!cells[4].is_empty(), "closed-route value in {line}");
    }
}

#[test]
fn eigen_prints_levels_and_resonances() {
    let out = run(&["eigen"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("manifold 1"));
    assert!(text.contains("two-photon drive resonances"));
    assert!(text.contains("2*sqrt(2)*g"));
}

#[test]
fn gnuplot_hint_lands_on_stderr_not_in_the_table() {
    let out = run(&[
        "jc-sweep",
        "--points",
        "2",
        "--start",
        "0",
        "--stop",
        "1",
        "--outputs",
        "g2_ana",
        "--gnuplot-hint",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("gnuplot"));
    assert!(!stdout_of(&out).contains("gnuplot"));
}

#[test]
fn manifest_flag_writes_a_parseable_sidecar() {
    let manifest_path = scratch("sidecar.json");
    let table_path = scratch("sidecar.csv");
    let out = run(&[
        "com-sweep",
        "--points",
        "3",
        "--start",
        "90",
        "--stop",
        "110",
        "--outputs",
        "nbar_ana",
        "--kappa-hz",
        "1.5e6",
        "--out",
        table_path.to_str().unwrap(),
        "--manifest",
        manifest_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["command"], "com-sweep");
    assert_eq!(manifest["kappa_hz"], 1.5e6);
    assert_eq!(manifest["points"], 3);
    assert!(manifest["version"].is_string());

    // The sidecar reruns the table byte-for-byte.
    let rerun_path = scratch("sidecar-rerun.csv");
    let rerun = run(&[
        "com-sweep",
        "--config",
        manifest_path.to_str().unwrap(),
        "--out",
        rerun_path.to_str().unwrap(),
    ]);
    assert!(rerun.status.success());
    assert_eq!(
        std::fs::read(&table_path).unwrap(),
        std::fs::read(&rerun_path).unwrap()
    );
}
