use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quatem(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatem"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("failed to launch quatem")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&quatem(&["frobnicate"], dir.path())), 2);
    assert_eq!(code(&quatem(&["kernel-probe", "--alpha", "1,2,3"], dir.path())), 2);
}

#[test]
fn gen_mesh_writes_off() {
    let dir = tempfile::tempdir().unwrap();
    let out = quatem(&["gen-mesh", "--level", "1", "-o", "m.off"], dir.path());
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("m.off")).unwrap();
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    assert_eq!(lines.next().unwrap().trim(), "OFF");
    let counts: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(&counts[..2], &[42, 80]);

    let field = quatem(&["gen-field", "--mesh", "m.off", "-o", "t.csv"], dir.path());
    assert_eq!(code(&field), 0);
    let rows = std::fs::read_to_string(dir.path().join("t.csv")).unwrap().lines().count();
    assert_eq!(rows, 81);
}

#[test]
fn kernel_probe_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = quatem(&["kernel-probe", "--samples", "5", "--alpha", "1,0.3"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("r,theta_re"));
    for line in &lines[1..] {
        let values: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(values.len(), 11);
        assert!(values.iter().all(|v| v.is_finite()));
    }
}

#[test]
fn verify_bp_reports_decrease_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify-bp", "--levels", "2,3", "--field", "beltrami", "-o"];
    let a = quatem(&[&args[..], &["a.json"]].concat(), dir.path());
    let b = quatem(&[&args[..], &["b.json"]].concat(), dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    let (ja, jb) = (
        std::fs::read(dir.path().join("a.json")).unwrap(),
        std::fs::read(dir.path().join("b.json")).unwrap(),
    );
    assert_eq!(ja, jb);
    let report = json(dir.path(), "a.json");
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["decreasing"], true);
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_bp_flags_growth_under_coarsening() {
    let dir = tempfile::tempdir().unwrap();
    let out = quatem(&["verify-bp", "--levels", "3,2", "-o", "r.json"], dir.path());
    assert_eq!(code(&out), 3);
    assert_eq!(json(dir.path(), "r.json")["decreasing"], false);
}

#[test]
fn probe_near_boundary_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = quatem(&["verify-bp", "--levels", "2", "--probe", "0.97,0,0"], dir.path());
    assert_eq!(code(&out), 4);
}

#[test]
fn resonant_medium_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = quatem(&["gen-field", "--level", "1", "--beta", "1"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn reconstruct_recovers_manufactured_solution() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&quatem(&["gen-field", "-o", "t.csv"], dir.path())), 0);
    let out = quatem(&["reconstruct", "--traces", "t.csv", "--exact", "-o", "r.json"], dir.path());
    assert_eq!(code(&out), 0);
    let report = json(dir.path(), "r.json");
    assert_eq!(report["points"].as_array().unwrap().len(), 10);
    assert!(report["max_error"].as_f64().unwrap() < 0.05);
}

#[test]
fn extend_check_is_deterministic_and_separates_perturbed_traces() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&quatem(&["gen-field", "-o", "t.csv"], dir.path())), 0);
    let run = |name: &str, extra: &[&str]| {
        let args = [&["extend-check", "--traces", "t.csv", "-o", name][..], extra].concat();
        code(&quatem(&args, dir.path()))
    };
    assert_eq!(run("a.json", &[]), 0);
    assert_eq!(run("b.json", &[]), 0);
    assert_eq!(
        std::fs::read(dir.path().join("a.json")).unwrap(),
        std::fs::read(dir.path().join("b.json")).unwrap()
    );
    assert_eq!(run("p.json", &["--perturb", "0.1"]), 3);
    let (clean, noisy) = (json(dir.path(), "a.json"), json(dir.path(), "p.json"));
    assert_eq!(clean["extendible"], true);
    assert_eq!(noisy["extendible"], false);
    assert!(noisy["aggregate"].as_f64().unwrap() > 5.0 * clean["aggregate"].as_f64().unwrap());
}

#[test]
fn malformed_traces_are_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "triangle,e1_re\n0,1\n").unwrap();
    let out = quatem(&["extend-check", "--level", "1", "--traces", "bad.csv"], dir.path());
    assert_eq!(code(&out), 2);
}
