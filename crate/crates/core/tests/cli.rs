//! End-to-end checks of the command-line tool, in process and through the binary.

use std::path::PathBuf;
use std::process::Command;

use paragrade::cli::{run, EXIT_IDENTITY, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("paragrade").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("paragrade-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_paragrade")).args(args).env_remove("PARAGRADE_SEED").output().unwrap()
}

const COMPENSATED: &str = "ququart q;\ngate Xb q;\ngate Hb q;\ngate Hb q;\ngate Xb q;\nassert-grade q (0,0);\n";

#[test]
fn simulate_strict_rejects_a_lone_flip() {
    let f = scratch("lone.qq", "ququart q;\n\ngate Xb q;\n");
    let path = f.to_str().unwrap();
    let (code, _, err) = call(&["simulate", path]);
    assert_eq!(code, EXIT_IDENTITY);
    assert!(err.contains(":3:1:"), "{err}");
    assert_eq!(call(&["simulate", "--permissive", path]).0, EXIT_OK);
}

#[test]
fn simulate_compensated_circuit_passes_and_is_deterministic() {
    let f = scratch("comp.qq", COMPENSATED);
    let a = call(&["simulate", f.to_str().unwrap()]);
    assert_eq!(a.0, EXIT_OK, "{}", a.2);
    assert!(a.2.contains("1 assertion(s) passed"));
    assert_eq!(a, call(&["simulate", f.to_str().unwrap()]));
}

#[test]
fn simulate_reports_diagnostics_with_positions() {
    let f = scratch("bad.qq", "ququart q;\ngate Xb r;\n");
    let (code, _, err) = call(&["simulate", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("error[E004] 2:9"), "{err}");
    assert_eq!(call(&["simulate", "/nonexistent/x.qq"]).0, EXIT_USAGE);
}

#[test]
fn measurement_seed_makes_runs_reproducible() {
    let f = scratch("meas.qq", "ququart q;\ngate Hb q;\ngate Ha q;\nmeasure q;\n");
    let p = f.to_str().unwrap();
    let runs: Vec<_> = (0..3).map(|_| call(&["simulate", "--seed", "7", p])).collect();
    assert!(runs.iter().all(|r| r == &runs[0]));
}

#[test]
fn audit_exit_codes() {
    let (code, out, _) = call(&["audit-algebra"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 13);
    for suite in ["grading", "yang-baxter", "cartan", "fractional-laplacian"] {
        assert_eq!(call(&["audit-algebra", "--perturb", suite]).0, EXIT_IDENTITY, "{suite}");
    }
}

#[test]
fn fbm_csv_is_deterministic_per_seed() {
    let a = call(&["fbm", "--hurst", "0.7", "--n", "64", "--paths", "2", "--seed", "3"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, call(&["fbm", "--hurst", "0.7", "--n", "64", "--paths", "2", "--seed", "3"]).1);
    assert_ne!(a.1, call(&["fbm", "--hurst", "0.7", "--n", "64", "--paths", "2", "--seed", "4"]).1);
    assert!(a.1.starts_with("t,path0,path1\n"));
    assert_eq!(a.1.lines().count(), 66);
}

#[test]
fn json_flag_produces_json() {
    let (code, out, _) = call(&["--json", "truth-table", "cnot"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["rows"].is_array());
}

#[test]
fn synthesize_matrix_emits_a_runnable_circuit() {
    let cnot = "1,0,0,0,0,0,0,0\n0,0,1,0,0,0,0,0\n0,0,0,0,0,0,1,0\n0,0,0,0,1,0,0,0\n";
    let f = scratch("m.csv", cnot);
    let (code, dsl, err) = call(&["synthesize", "--matrix", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let prog = scratch("synth.qq", &dsl);
    assert_eq!(call(&["simulate", "--permissive", prog.to_str().unwrap()]).0, EXIT_OK);
    let (code, csv, _) = call(&["synthesize", "--random", "5", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn deformed_braiding_breaches() {
    assert_eq!(call(&["yang-baxter", "--q", "0"]).0, EXIT_OK);
    assert_eq!(call(&["yang-baxter", "--q", "-0.7"]).0, EXIT_IDENTITY);
}

#[test]
fn binary_forwards_exit_codes_and_streams() {
    let ok = binary(&["truth-table", "cnot", "--csv"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("control,"));
    assert!(!ok.stderr.is_empty());
    assert_eq!(binary(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(binary(&["audit-algebra", "--perturb", "gates"]).status.code(), Some(2));
    let help = binary(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("PARAGRADE_SEED"));
}

#[test]
fn seed_can_come_from_the_environment() {
    let run_with = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_paragrade"))
            .args(["fbm", "--hurst", "0.3", "--n", "32"])
            .env("PARAGRADE_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let explicit = binary(&["fbm", "--hurst", "0.3", "--n", "32", "--seed", "11"]).stdout;
    assert_eq!(run_with("11"), explicit);
    assert_ne!(run_with("12"), explicit);
}
