use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fixfactor::io::DecomposeReport;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixfactor"))
        .args(args)
        .env_remove("FIXFACTOR_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fixfactor-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn decompose_swap() {
    let swap = data("swap.json");
    let out = run(&["decompose", swap.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: DecomposeReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.dim_fix, 2);
    assert!(!report.ergodic);
    assert_eq!(report.classes, vec![vec!["a", "b"], vec!["c"]]);
    assert_eq!(report.stabilization_degree.to_string(), "0");

    let dot = run(&["decompose", swap.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(dot.status.code(), Some(0));
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph") && text.contains(r#"label="c|1""#));
    let export = run(&["export-dot", swap.to_str().unwrap()]);
    assert_eq!(String::from_utf8(export.stdout).unwrap(), text);
}

#[test]
fn small_commands() {
    let swap = data("swap.json");
    let swap = swap.to_str().unwrap();
    let sier = data("sierpinski_const.json");

    let e = run(&["ergodic", sier.to_str().unwrap()]);
    assert_eq!(e.status.code(), Some(0));
    assert_eq!(json(&e)["ergodic"], true);

    let l = run(&["lyapunov", swap, "--set", "c"]);
    assert_eq!(json(&l)["absolutely_stable"], true);
    let l = run(&["lyapunov", swap, "--set", "a"]);
    assert_eq!(json(&l)["stable_plain"], false);

    assert_eq!(json(&run(&["oracle", swap])), serde_json::json!([["a", "b"], ["c"]]));
    let t = json(&run(&["trace", swap]));
    assert_eq!(t[0]["degree"], "0");
    let q = json(&run(&["quotient", swap]));
    assert_eq!(q["discrete"], true);
    assert_eq!(q["quotient"]["points"].as_array().unwrap().len(), 2);
}

#[test]
fn input_errors_exit_2() {
    let out = run(&["decompose", data("unknown_field.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("E_FORMAT") && msg.contains("line 4"), "{msg}");

    let out = run(&["decompose", data("discontinuous.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E_CONTINUITY"));

    let out = run(&["decompose", "/nonexistent/system.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E_IO"));

    let out = run(&["decompose"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["census", "--points", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E_SIZE"));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FIXFACTOR_SEED"));
}

#[test]
fn ladder_and_window() {
    let out = run(&["ladder", "cat(strand)", "--max-degree", "w+2", "--locate", "3/1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["stabilization_degree"], "1");
    assert_eq!(r["located"][0]["aorb0"], "[3, 3/1]");
    assert_eq!(r["located"][0]["classes"][0][1], "[0, w)");

    let out = run(&["ladder", "cat(strand)", "--locate", "w+1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E_LOCATOR"));

    let out = run(&["window", "ramp", "--size", "2,2", "--size", "3,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["answers_stable"], true);
}

#[test]
fn census_and_replay() {
    let out = run(&["census", "--points", "3", "--check", "oracle,degree-zero", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["systems"], 1 + 14 + 375);
    assert_eq!(r["degree_histogram"]["0"], r["systems"]);

    let dir = scratch("census");
    let out = run(&[
        "census",
        "--points",
        "3",
        "--check",
        "prolongation",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let first = &r["checks"][0]["counterexamples"][0]["system"];
    let file = dir.join("prolongation-0.json");
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(&saved, first);

    let replay = run(&["decompose", file.to_str().unwrap(), "--check", "prolongation"]);
    assert_eq!(replay.status.code(), Some(1));
    assert!(stderr(&replay).contains("D2("));
    let clean = run(&["decompose", file.to_str().unwrap(), "--check", "oracle"]);
    assert_eq!(clean.status.code(), Some(0));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn seed_variable_has_no_effect() {
    let swap = data("swap.json");
    let plain = run(&["decompose", swap.to_str().unwrap()]);
    let seeded = Command::new(env!("CARGO_BIN_EXE_fixfactor"))
        .args(["decompose", swap.to_str().unwrap()])
        .env("FIXFACTOR_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(plain.stdout, seeded.stdout);
}
