//! The `cavbo` binary: config validation, dry runs, result bundles.

use std::path::Path;
use std::process::{Command, Output};

fn cavbo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavbo")).args(args).output().expect("binary runs")
}

const SMALL: &str = r#"
preset = "ring"

[ring]
grid_points = 41
grid_spacing = "2.2 nm"
basis_states = 10

[photon]
fock_size = 12
q_points = 41
q_spacing = "3 sqrt(aJ)*fs"

[solver]
cbo_surfaces = 3
vib_states = 3
exact_states = 4
"#;

fn small_config(dir: &Path) -> String {
    let p = dir.join("small.toml");
    std::fs::write(&p, SMALL).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn dry_run_prints_parameters_and_dimension() {
    let out = cavbo(&["solve-exact", "--preset", "ring-table1", "--dry-run"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("photon.hbar_omega"));
    assert!(text.contains("composite dimension 1640"));
}

#[test]
fn every_bad_key_is_reported_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "preset = \"ring\"\n[photon]\nhbar_omega = \"1.41 parsec\"\nbogus = 1\n[ring]\nwidht = \"10 nm\"\n").unwrap();
    let out = cavbo(&["solve-exact", "--config", p.to_str().unwrap(), "--dry-run"]);
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "Config");
    let msgs: Vec<String> = err["messages"].as_array().unwrap().iter().map(|m| m.as_str().unwrap().to_string()).collect();
    for key in ["bogus", "widht", "hbar_omega"] {
        assert!(msgs.iter().any(|m| m.contains(key)), "{key} missing from {msgs:?}");
    }
}

#[test]
fn bad_lambda_is_rejected() {
    let out = cavbo(&["compare", "--preset", "ring", "--lambda", "0.1 furlongs", "--dry-run"]);
    assert!(!out.status.success());
    assert!(serde_json::from_slice::<serde_json::Value>(&out.stderr).is_ok());
}

#[test]
fn compare_writes_a_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out_dir = dir.path().join("out");
    let out = cavbo(&["compare", "--config", &cfg, "--lambda", "0.1342", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bundle = out_dir.join("compare");
    let csv = std::fs::read_to_string(bundle.join("comparison.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.contains("E_exact[meV]") && header.contains("overlap[%]"));
    assert_eq!(csv.lines().count(), 1 + 4);
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(bundle.join("manifest.json")).unwrap()).unwrap();
    assert!(manifest["config"].as_str().unwrap().contains("grid_points = 41"));
    assert!(manifest["files"].as_array().unwrap().iter().any(|f| f.as_str() == Some("comparison.csv")));
}

#[test]
fn surface_at_zero_coupling_is_harmonic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = cavbo(&["cbo-surface", "--config", &cfg, "--lambda", "0", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let dev: f64 = text
        .split("harmonic reference ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .and_then(|s| s.parse().ok())
        .expect("deviation printed");
    assert!(dev < 1e-9, "{text}");
    let pes = std::fs::read_to_string(dir.path().join("cbo-surface/pes_lambda0.0000.csv")).unwrap();
    assert!(pes.starts_with("q[sqrt(aJ)*fs],V_0[meV]"));
    assert!(dir.path().join("cbo-surface/pes_lambda0.0000.svg").exists());
}
