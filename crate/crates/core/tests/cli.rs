//! The `biphoton` binary: outputs and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn biphoton(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biphoton"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.toml",
        "scheme = \"collision\"\neffects = \"df,npm\"\nseed = 4\n[grid]\nn = 128\nspan = \"40 ps\"\n",
    );
    let o = biphoton(&["run", "--config", &cfg, "--out", "res"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "jsa.csv",
        "report.json",
        "marginals.csv",
        "mismatch_path.csv",
    ] {
        assert!(dir.path().join("res").join(f).exists(), "{f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("res/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["seed"], 4);
    assert_eq!(report["spec"]["grid"]["n"], 128);
    let r = report["report"]["pair_probability"].as_f64().unwrap();
    assert!((r - 0.2).abs() < 1e-3);
    let rows = std::fs::read_to_string(dir.path().join("res/jsa.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows, 1 + 128 * 128);
}

#[test]
fn sweep_and_ensemble_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let o = biphoton(
        &[
            "sweep",
            "--scheme",
            "collision",
            "--lengths",
            "0.4,1",
            "--grid-n",
            "128",
            "--method",
            "analytic",
            "--out",
            "s",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("scheme,effects,length_m,purity"));
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("collision,none,0.4,"));

    let o = biphoton(
        &[
            "ensemble",
            "--scheme",
            "collision",
            "--effects",
            "df",
            "--paths",
            "4",
            "--method",
            "analytic",
            "--out",
            "e",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("e/ensemble.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    let o = biphoton(
        &[
            "validate",
            "--scheme",
            "collision",
            "--effects",
            "npm",
            "--dz",
            "2cm",
            "--out",
            "v",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("v/validate.json")).unwrap())
            .unwrap();
    assert!(v["fidelity"].as_f64().unwrap() > 0.999);
    assert!(dir.path().join("v/convergence.csv").exists());
}

#[test]
fn configuration_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = write(dir.path(), "a.toml", "[solver]\nstep = 1\n");
    let o = biphoton(&["run", "--config", &bad_key], dir.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("step"));
    assert_eq!(
        code(&biphoton(&["run", "--effects", "raman"], dir.path())),
        1
    );
    assert_eq!(code(&biphoton(&["run", "--frobnicate"], dir.path())), 1);
    assert_eq!(
        code(&biphoton(&["ensemble", "--effects", "npm"], dir.path())),
        1
    );
    assert_eq!(code(&biphoton(&["sweep"], dir.path())), 1);
    assert_eq!(code(&biphoton(&["--help"], dir.path())), 0);
}

#[test]
fn numerical_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "zero.toml",
        r#"
scheme = "custom"
length = 1.0
[grid]
n = 64
span = "40 ps"
[custom.waveguide]
beta1_s = 0.0
beta1_i = 1e-11
gamma = 0.0
[[custom.pumps]]
power = 1.0
pulse_duration = "1 ps"
"#,
    );
    let o = biphoton(&["run", "--config", &cfg], dir.path());
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn io_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let o = biphoton(
        &[
            "run",
            "--scheme",
            "collision",
            "--grid-n",
            "64",
            "--out",
            "blocker/sub",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let missing = biphoton(&["run", "--config", "nope.toml"], dir.path());
    assert_eq!(code(&missing), 3);
}
