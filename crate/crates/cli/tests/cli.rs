use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use qmbp_cli::{run, Pipeline, RunConfig};

fn qmbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmbp"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &TempDir, body: &str) -> PathBuf {
    let p = dir.path().join("run.json");
    std::fs::write(&p, body).unwrap();
    p
}

fn read_report(dir: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join("report.json")).unwrap()).unwrap()
}

fn csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn birth_death_full_run_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"birth_death": {"a": 2, "b": 1}, "pipelines": ["all"]}"#,
    );
    let out = dir.path().join("out");
    let o = qmbp(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let r = read_report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["pass"], true);
    let d2 = r["hardy"]["d2"].as_f64().unwrap();
    assert!((d2 - 0.286011).abs() < 1e-5, "{d2}");
    let checks = r["consistency"].as_array().unwrap();
    assert!(checks.len() >= 8);
    assert!(checks.iter().all(|c| c["pass"] == true));
    for name in [
        "eigen.hardy_sandwich",
        "ctmc.matches_eigen",
        "bounds.contains_d2.log2",
    ] {
        assert!(checks.iter().any(|c| c["name"] == name), "missing {name}");
    }
    assert!(r["errors"].as_array().unwrap().is_empty());
}

#[test]
fn supercritical_law_is_attributed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, r#"{"rates": [1, -3, 2], "pipelines": ["bounds"]}"#);
    let out = dir.path().join("out");
    let o = qmbp(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = read_report(&out);
    let errors = r["errors"].as_array().unwrap();
    let pipelines: Vec<&str> = errors
        .iter()
        .map(|e| e["pipeline"].as_str().unwrap())
        .collect();
    assert_eq!(pipelines, ["hardy", "bounds"]);
    assert!(errors
        .iter()
        .all(|e| e["error"].as_str().unwrap().contains("not subcritical")));
    assert_eq!(r["pass"], false);
}

#[test]
fn skip2_hardy_is_stationary() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"skip2": {"b0": 1, "b2": 0.3, "b3": 0.3}, "pipelines": ["hardy"]}"#,
    );
    let out = dir.path().join("out");
    let o = qmbp(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = read_report(&out);
    let s_star = r["hardy"]["s_star"].as_f64().unwrap();
    assert!(s_star > 0.0 && s_star < 1.0);
    assert!(r["hardy"]["phi_prime_at_star"].as_f64().unwrap().abs() < 1e-6);
    assert!(r.get("eigen").is_none() && r.get("bounds").is_none());
    assert!(!out.join("eigenfunction.csv").exists());
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    for body in [
        r#"{"rates": [1, -2, 1], "unknown": 3}"#,
        r#"{"rates": [1, -2, 1], "birth_death": {"a": 2, "b": 1}}"#,
        r#"{"pipelines": ["hardy"]}"#,
        "not json",
    ] {
        let cfg = write_config(&dir, body);
        let o = qmbp(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body}");
    }
    let o = qmbp(&[
        "--config",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, r#"{"rates": [2, -3, 1], "pipelines": ["all"]}"#);
    let o = qmbp(&["--config", cfg.to_str().unwrap(), "--pipeline", "validate"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.get("hardy").is_none());
    assert_eq!(r["law"]["criticality"], "subcritical");
}

#[test]
fn curves_have_headers_and_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"rates": [2, -3, 1], "ctmc": {"points": 40, "mc_paths": 2000}}"#,
    );
    let out = dir.path().join("out");
    let o = qmbp(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "5",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = read_report(&out);

    let (h, phi) = csv(&out.join("phi.csv"));
    assert_eq!(h, "s,phi");
    assert_eq!(
        phi.len() as u64,
        r["hardy"]["curve_points"].as_u64().unwrap()
    );
    assert!(phi[0][1] < 1e-3 && phi[phi.len() - 1][1] < 1e-3);

    let (h, eig) = csv(&out.join("eigenfunction.csv"));
    assert_eq!(h, "s,phi0");
    assert_eq!(
        eig.len() as u64,
        r["eigen"]["eigfun_points"].as_u64().unwrap()
    );

    for name in ["survival.csv", "survival_mc.csv"] {
        let (h, rows) = csv(&out.join(name));
        assert_eq!(h, "t,survival,stderr");
        assert_eq!(rows.len(), 40, "{name}");
        assert!(rows
            .windows(2)
            .all(|w| w[1][0] > w[0][0] && w[1][1] <= w[0][1] + 1e-12));
    }
    let text = std::fs::read_to_string(out.join("phi.csv")).unwrap();
    let field = text.lines().nth(1).unwrap().split(',').next().unwrap();
    assert_eq!(
        field
            .split('e')
            .next()
            .unwrap()
            .replace(['.', '-'], "")
            .len(),
        17
    );
}

#[test]
fn library_resolves_dependencies() {
    let cfg = RunConfig {
        rates: Some(vec![2.0, -3.0, 1.0]),
        pipelines: vec![Pipeline::Eigen],
        ..Default::default()
    };
    assert_eq!(
        cfg.resolved_pipelines(),
        [Pipeline::Validate, Pipeline::Hardy, Pipeline::Eigen]
    );
    let out = run(&cfg).unwrap();
    assert!(out.pass());
    assert!((out.eigen.unwrap().ell0 - 1.6153676634).abs() < 1e-8);
}
