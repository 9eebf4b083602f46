//! End-to-end CLI behavior: exit codes, file contents, env overrides.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thermal-coset"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("thermal-coset-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn invalid_zeta_exits_2_with_message() {
    let out = tmp("bad.json");
    let output = bin()
        .args(["rho", "--algebra", "su11", "--q", "0", "--zeta", "1.0,0", "--x", "1", "--output"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("zeta must satisfy |zeta| < 1"),
        "stderr: {stderr}"
    );
}

#[test]
fn missing_thermal_spec_exits_2() {
    let out = tmp("nothermal.json");
    let output = bin()
        .args(["rho", "--algebra", "su2", "--j", "0.5", "--z", "0.1,0", "--output"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn rho_json_reports_certified_trace_bound() {
    let out = tmp("rho.json");
    let status = bin()
        .args([
            "rho", "--algebra", "su2", "--j", "0.5", "--z", "0.1,0", "--x", "1", "--cutoff",
            "25", "--format", "json", "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let deficit = doc["trace_deficit_bound"].as_f64().unwrap();
    assert!(deficit <= 1e-8, "reported bound {deficit}");
    let trace = doc["trace_re"].as_f64().unwrap();
    assert!((trace - 1.0).abs() <= deficit * (1.0 + 1e-9));
    assert_eq!(doc["dim"].as_u64().unwrap(), 26 * 26);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 676 * 676);
    let _ = std::fs::remove_file(&out);
}

#[test]
fn rho_su11_zero_label_is_diagonal_csv() {
    let out = tmp("rho11.csv");
    let status = bin()
        .args([
            "rho", "--algebra", "su11", "--q", "0", "--zeta", "0,0", "--x", "1", "--cutoff",
            "20", "--format", "csv", "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# config="));
    assert!(text.contains("row_label,col_label,re,im"));
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], fields[1], "off-diagonal entry in {line}");
    }
    let _ = std::fs::remove_file(&out);
}

#[test]
fn fidelity_scan_endpoint_reaches_unity() {
    let out = tmp("fid.csv");
    let status = bin()
        .args([
            "fidelity", "--algebra", "su2", "--j", "1", "--z", "0.3,0", "--x-min", "0.5",
            "--x-max", "40", "--steps", "9", "--scale", "log", "--omega-hz", "1e7", "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,T_equivalent_K,F_closed,F_numeric,abs_delta,status");
    let last = text.lines().filter(|l| !l.starts_with('#')).next_back().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    let f_numeric: f64 = fields[3].parse().unwrap();
    assert!((f_numeric - 1.0).abs() < 1e-8, "x = 40 endpoint F = {f_numeric}");
    let delta: f64 = fields[4].parse().unwrap();
    assert!(delta < 1e-7);
    assert_eq!(fields[5], "ok");
    let _ = std::fs::remove_file(&out);
}

#[test]
fn wigner_vacuum_grid_is_nonnegative() {
    let out = tmp("vac.csv");
    let status = bin()
        .args([
            "wigner", "--algebra", "su11", "--q", "0", "--zeta", "0,0", "--x", "40",
            "--count1", "11", "--count2", "11", "--range1", "-2,2", "--range2", "-2,2",
            "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut max_v = f64::NEG_INFINITY;
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let v: f64 = fields[2].parse().unwrap();
        assert!(v > -1e-10, "vacuum Wigner negative: {v}");
        max_v = max_v.max(v);
    }
    // near-Gaussian peak close to the raw vacuum anchor 4
    assert!((max_v - 4.0).abs() < 1e-3, "peak {max_v}");
    let _ = std::fs::remove_file(&out);
    let _ = std::fs::remove_file(out.with_extension("meta.json"));
}

#[test]
fn auto_cutoff_meets_requested_tail() {
    let out = tmp("auto.json");
    let status = bin()
        .args([
            "rho", "--algebra", "su11", "--q", "1", "--zeta", "0.3,0", "--x", "0.8",
            "--cutoff", "auto", "--tail-tol", "1e-9", "--format", "json", "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert!(doc["trace_deficit_bound"].as_f64().unwrap() < 1e-9);
    assert!(doc["config"]["cutoff"].as_u64().unwrap() > 1);
    let _ = std::fs::remove_file(&out);
}

#[test]
fn env_cap_override_exits_3() {
    let out = tmp("cap.json");
    let output = bin()
        .env("THERMAL_COSET_MAX_DIM", "100")
        .args([
            "rho", "--algebra", "su2", "--j", "0.5", "--z", "0.1,0", "--x", "1", "--cutoff",
            "25", "--output",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("cap"), "stderr: {stderr}");
}

#[test]
fn hw_rho_is_supported_and_fidelity_rejects_hw() {
    let out = tmp("hw.csv");
    let status = bin()
        .args([
            "rho", "--algebra", "hw", "--alpha", "0.3,0", "--x", "1", "--cutoff", "25",
            "--format", "csv", "--tail-tol", "1e-6", "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let _ = std::fs::remove_file(&out);

    let output = bin()
        .args([
            "fidelity", "--algebra", "hw", "--alpha", "0.3,0", "--x-min", "0.1", "--x-max",
            "1", "--output",
        ])
        .arg(tmp("hwfid.csv"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
