use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn phmass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phmass")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("phmass-{}-{name}", std::process::id()))
}

#[test]
fn flux_passes_and_matches() {
    let out = phmass(&["flux"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["command"], "flux");
    assert_eq!(v["pass"], true);
    let flux = v["checks"][0]["value"].as_f64().unwrap();
    assert!((flux + 8.0 * PI).abs() < 1e-6);
    assert_eq!(v["parameters"]["grid"], serde_json::json!([64, 64]));
}

#[test]
fn mass_at_a_custom_schedule() {
    let out = phmass(&["mass", "--A", "1", "--schedule", "10,20,40"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m = json(&out)["checks"][0]["value"].as_f64().unwrap();
    assert!((m / (48.0 * PI * PI) - 1.0).abs() < 1e-3, "{m}");
}

#[test]
fn zero_mass_is_zero() {
    let out = phmass(&["mass", "--A", "0", "--schedule", "10,20,40"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["checks"][0]["value"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(v["checks"][0]["comparison"], "absolute");
}

#[test]
fn negative_mass_flag_parses() {
    let out = phmass(&["mass", "--A", "-0.5", "--schedule", "10,20,40"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["parameters"]["A"].as_f64(), Some(-0.5));
}

#[test]
fn failing_check_exits_one() {
    let out = phmass(&["flux", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        &["flux", "--A", "1"][..],
        &["bubble", "--lambda", "1"],
        &["mass", "--schedule", "20,10"],
        &["examples", "--seed", "1", "--jet-order", "3"],
        &["suite", "--seed", "1"],
        &["kohn", "--seed", "1", "--A", "0"],
        &["nonsense"],
        &["flux", "--format", "xml"],
    ] {
        let out = phmass(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error"), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(phmass(&["--help"]).status.code(), Some(0));
    assert_eq!(phmass(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("flux.conf");
    std::fs::write(&cfg, "# flux at a larger sphere\nrho0 = 2.0\ngrid = 32,32\nformat = csv\n").unwrap();
    let c = cfg.to_str().unwrap();

    let out = phmass(&["flux", "--config", c]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("name,value,comparison,reference,tolerance,provenance,pass,error\n"));

    let out = phmass(&["flux", "--config", c, "--format", "json", "--grid", "16,16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["parameters"]["rho0"].as_f64(), Some(2.0));
    assert_eq!(v["parameters"]["grid"], serde_json::json!([16, 16]));

    std::fs::write(&cfg, "rho0 = 2.0\nradius = 3\n").unwrap();
    assert_eq!(phmass(&["flux", "--config", c]).status.code(), Some(2));
    std::fs::remove_file(&cfg).unwrap();
}

#[test]
fn json_is_deterministic_apart_from_timing() {
    let run = || {
        let mut v = json(&phmass(&["bubble", "--seed", "7", "--lambda", "2"]));
        assert!(v["timing"]["total_seconds"].is_number());
        v.as_object_mut().unwrap().remove("timing");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn report_written_to_file() {
    let path = scratch("flux.json");
    let out = phmass(&["flux", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with("}\n") && text.lines().count() == 1);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn unwritable_output_exits_one() {
    let out = phmass(&["flux", "--out", "/nonexistent-dir/report.json"]);
    assert_eq!(out.status.code(), Some(1));
}
