use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softcrack")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

/// Metadata object and data rows of a CSV artifact.
fn read_csv(path: &Path) -> (serde_json::Value, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let (first, rest) = text.split_once('\n').unwrap();
    let meta = serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap();
    let rows = rest.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect();
    (meta, rows)
}

#[test]
fn sigma0_emits_json() {
    let out = run(&["sigma0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["sigma0"].as_f64().unwrap() - 1.164430244667).abs() < 1e-6);
    for key in ["est_error", "mu0", "mu_star", "kappa_star", "config"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn non_positive_kappa_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"material": {"mu1": 1, "mu2": 2, "kappa": 0}}"#);
    let out = run(&["sigma0", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa"));
}

#[test]
fn unknown_keys_and_missing_files_are_config_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"material": {"mu1": 1, "mu2": 2, "kappa": 1, "nu": 3}}"#);
    assert_eq!(run(&["sigma0", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(run(&["sigma0", "--config", "/nonexistent/c.json"]).status.code(), Some(2));
}

#[test]
fn zero_force_gives_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"load": {"kind": "point", "F": 0, "a": 1, "b": 0.5}}"#);
    let out = run(&["sigma0", "--config", &cfg]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sigma0"].as_f64(), Some(0.0));
}

#[test]
fn configured_inclusion_adds_the_correction() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"load": {"kind": "smooth"},
            "inclusion": {"d": 1, "phi": 1.5707963267948966, "alpha": 0, "ell_a": 0.1, "ell_b": 0.05, "nu_star": 5}}"#,
    );
    let out = run(&["sigma0", "--config", &cfg]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = v["perturbation"]["delta_sigma0"].as_f64().unwrap();
    assert!((d / -0.006723798402 - 1.0).abs() < 1e-4);
}

#[test]
fn sweep_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["sweep", "--axis", "kappa_star", "--from", "1e-4", "--to", "1e4", "--points", "9", "--log", "--out", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (meta, rows) = read_csv(&a);
    assert_eq!(meta["command"], "sweep");
    assert_eq!(rows.len(), 9);
    let head = std::fs::read_to_string(&a).unwrap().lines().nth(1).unwrap().to_string();
    assert_eq!(head, "kappa_star,mu_star,b,sigma0,est_error");
    let s: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(s.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn mu_star_sweep_lines_meet_in_the_stiff_limit() {
    let dir = TempDir::new().unwrap();
    let mut last = Vec::new();
    for b in ["0.75", "0.25"] {
        let cfg = write(&dir, "c.json", &format!(r#"{{"load": {{"kind": "point", "F": 1, "a": 1, "b": {b}}}}}"#));
        let out = dir.path().join("s.csv");
        run(&["sweep", "--config", &cfg, "--axis", "mu_star", "--from", "-0.99", "--to", "0.5", "--points", "4", "--out", out.to_str().unwrap()]);
        let (_, rows) = read_csv(&out);
        last.push(rows.iter().map(|r| r[3].parse::<f64>().unwrap()).collect::<Vec<_>>());
    }
    let gap = |i: usize| (last[0][i] - last[1][i]).abs() / last[0][i].abs();
    assert!(gap(0) < 0.02);
    assert!(gap(3) > gap(0));
}

#[test]
fn equal_contrasts_give_unit_ratio() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.csv");
    let o = run(&["ratio", "--from", "0.01", "--to", "1", "--points", "3", "--log", "--mu-star-1", "0.3", "--mu-star-2", "0.3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] == "1"));
}

#[test]
fn ratio_accepts_both_load_kinds() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"load": {"kind": "smooth"}}"#);
    let o = run(&["ratio", "--config", &cfg, "--from", "0.01", "--to", "0.01", "--points", "1", "--mu-star-2", "-0.5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["rows"][0]["r"].as_f64().unwrap() > 0.0);
}

#[test]
fn bad_ranges_exit_with_config_code() {
    assert_eq!(run(&["sweep", "--axis", "mu_star", "--from", "-1.5", "--to", "0", "--points", "3"]).status.code(), Some(2));
    assert_eq!(run(&["ratio", "--from", "1", "--to", "0.1"]).status.code(), Some(2));
}

#[test]
fn map_rows_metadata_and_raster() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.csv");
    let pgm = dir.path().join("m.pgm");
    let o = run(&["map", "--phi-steps", "5", "--alpha-steps", "8", "--out", out.to_str().unwrap(), "--pgm", pgm.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (meta, rows) = read_csv(&out);
    assert_eq!(meta["config"]["inclusion"]["nu_star"], 5.0);
    assert_eq!(rows.len(), 40);
    let image = std::fs::read_to_string(&pgm).unwrap();
    assert!(image.starts_with("P2\n8 5\n255\n"));
}

#[test]
fn circular_inclusion_map_is_constant_along_alpha() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.csv");
    let cfg = write(&dir, "c.json", r#"{"inclusion": {"d": 1, "phi": 1, "alpha": 0, "ell_a": 0.1, "ell_b": 0.1, "nu_star": 5}}"#);
    let o = run(&["map", "--config", &cfg, "--phi-steps", "3", "--alpha-steps", "6", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.len(), 18);
    for row in rows.chunks(6) {
        let d0: f64 = row[0][2].parse().unwrap();
        for r in row {
            let d: f64 = r[2].parse().unwrap();
            assert!((d - d0).abs() <= 1e-12 * d0.abs());
        }
    }
}
