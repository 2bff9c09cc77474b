use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dicke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicke"))
        .args(args)
        .args(["--threads", "2"])
        .output()
        .expect("binary runs")
}

fn json_run(args: &[&str]) -> Value {
    let out = dicke(&[args, &["--format", "json"]].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn csv_body(path: &Path) -> Vec<csv::StringRecord> {
    let text = std::fs::read_to_string(path).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    csv::Reader::from_reader(body.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(dicke(&["spectrum", "--n", "0", "--d", "0.2"]).status.code(), Some(1));
    assert_eq!(dicke(&["bogus"]).status.code(), Some(1));
    assert_eq!(dicke(&["spectrum", "--n", "3", "--d", "-1"]).status.code(), Some(1));
    assert_eq!(dicke(&["fit", "--input", "/nonexistent/x.csv"]).status.code(), Some(3));
    assert_eq!(
        dicke(&["spectrum", "--n", "3", "--d", "0.2", "--out", "/nonexistent/dir/x.csv"]).status.code(),
        Some(3)
    );
    assert_eq!(dicke(&["--help"]).status.code(), Some(0));
}

#[test]
fn single_atom_spectrum() {
    let doc = json_run(&["spectrum", "--n", "1", "--d-range", "0.1:1.0", "--d-step", "0.3"]);
    let spectrum = doc["spectrum"].as_array().unwrap();
    assert_eq!(spectrum.len(), 4);
    for row in spectrum {
        assert!((row["gamma_over_gamma0"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
    for row in doc["variance"].as_array().unwrap() {
        assert!(row["variance"].as_f64().unwrap().abs() < 1e-12);
        assert_eq!(row["burst"], Value::Bool(false));
    }
}

#[test]
fn cube_spectrum_has_unit_mean() {
    let doc = json_run(&["spectrum", "--geometry", "cubic", "--n", "3", "--d-range", "0.3:1.5", "--d-step", "0.4"]);
    let rows = doc["spectrum"].as_array().unwrap();
    assert_eq!(rows.len(), 27 * 4);
    for chunk in rows.chunks(27) {
        let mean: f64 = chunk.iter().map(|r| r["gamma_over_gamma0"].as_f64().unwrap()).sum::<f64>() / 27.0;
        assert!((mean - 1.0).abs() < 1e-9);
    }
}

#[test]
fn spectrum_csv_header_and_companion() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chain.csv");
    let status = dicke(&["spectrum", "--n", "25", "--d-range", "0.2:0.3", "--d-step", "0.05", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# {"));
    assert!(text.contains("\"length\": \"lambda0\""));
    let rows = csv_body(&out);
    assert_eq!(rows.len(), 25 * 3);
    let variance = csv_body(&dir.path().join("chain.variance.csv"));
    let burst: Vec<&str> = variance.iter().map(|r| r.get(2).unwrap()).collect();
    assert_eq!(burst, ["true", "false", "false"]);
}

#[test]
fn infinite_chain_band() {
    let doc = json_run(&["infinite", "--d", "0.2", "--k-points", "3", "--pol", "perp"]);
    let band = doc["band"].as_array().unwrap();
    assert!((band[1]["gamma_over_gamma0"].as_f64().unwrap() - 1.875).abs() < 1e-12);
    assert_eq!(band[0]["gamma_over_gamma0"].as_f64().unwrap(), 0.0);
    let rule = &doc["header"]["sum_rule"];
    assert!(rule["relative_deviation"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(doc["header"]["critical_distance"]["critical_distance"], "21/80");
}

#[test]
fn infinite_square_band() {
    let doc = json_run(&[
        "infinite", "--geometry", "square", "--d", "0.3", "--k-points", "3", "--pol", "out-of-plane", "--n-total", "1000000",
    ]);
    let band = doc["band"].as_array().unwrap();
    let centre = band.iter().find(|r| r["kz"] == 0.0 && r["ky"] == 0.0).unwrap();
    assert_eq!(centre["gamma_over_gamma0"].as_f64().unwrap(), 0.0);
    let rule = &doc["header"]["sum_rule"];
    assert!(rule["relative_deviation"].as_f64().unwrap().abs() < 1e-6);
    let asym = doc["header"]["critical_distance"]["asymptotic"].as_f64().unwrap();
    assert!((asym - 0.980079).abs() < 1e-5);
}

#[test]
fn rejects_unsupported_infinite_geometry() {
    assert_eq!(dicke(&["infinite", "--geometry", "triangular"]).status.code(), Some(1));
}

fn write_columns(path: &Path, xs: &[f64], ys: &[f64]) {
    let mut w = csv::Writer::from_path(path).unwrap();
    w.write_record(["n_atoms", "d_max"]).unwrap();
    for (x, y) in xs.iter().zip(ys) {
        w.write_record([x.to_string(), y.to_string()]).unwrap();
    }
    w.flush().unwrap();
}

#[test]
fn fit_recovers_synthetic_models() {
    let dir = tempfile::tempdir().unwrap();
    let xs = [10.0, 100.0, 1e3, 1e4, 1e5];
    let power = dir.path().join("power.csv");
    write_columns(&power, &xs, &xs.map(|n: f64| 0.25 * n.powf(1.0 / 6.0)));
    let doc = json_run(&["fit", "--input", power.to_str().unwrap(), "--model", "power-law"]);
    assert!((doc["fit"]["q"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert!((doc["fit"]["p"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-9);

    let log = dir.path().join("log.csv");
    write_columns(&log, &xs, &xs.map(|n: f64| (0.1 + 0.0448 * n.ln()).sqrt()));
    let doc = json_run(&["fit", "--input", log.to_str().unwrap(), "--model", "sqrt-log"]);
    assert!((doc["fit"]["alpha"].as_f64().unwrap() - 0.1).abs() < 1e-9);
    assert!((doc["fit"]["beta"].as_f64().unwrap() - 0.0448).abs() < 1e-9);

    let short = dir.path().join("short.csv");
    write_columns(&short, &xs[..3], &xs[..3]);
    assert_eq!(dicke(&["fit", "--input", short.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn header_reproduces_run_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("scan.csv");
    let second = dir.path().join("rerun.csv");
    let out = dicke(&["scan", "--n-list", "20,40", "--pol", "par", "--out", first.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = dicke(&["scan", "--config", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(csv_body(&first), csv_body(&second));

    let doc = json_run(&["scan", "--config", first.to_str().unwrap(), "--n-list", "30"]);
    let rows = doc["scan"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["n_side"], 30);
    assert_eq!(doc["header"]["config"]["pol"], "par");
    // the first file is untouched by the rerun
    assert_eq!(csv_body(&first).len(), 2);
}

#[test]
fn scan_sweeps() {
    let doc = json_run(&["scan", "--geometry", "square", "--n", "6", "--pol-angle-sweep", "0:90:45"]);
    assert_eq!(doc["scan"].as_array().unwrap().len(), 3);
    let doc = json_run(&["scan", "--geometry", "rhombic", "--n", "6", "--lattice-angle-sweep", "60:90:30"]);
    let rows = doc["scan"].as_array().unwrap();
    assert_eq!(rows[0]["lattice_angle_deg"], 60.0);
    assert_eq!(
        dicke(&["scan", "--n", "6", "--lattice-angle-sweep", "60:90:30"]).status.code(),
        Some(1)
    );
}

#[test]
fn check_suite_passes() {
    let out = dicke(&["check", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["checks"].as_array().unwrap();
    assert!(rows.len() >= 8);
    assert!(rows.iter().all(|r| r["passed"] == Value::Bool(true)));
}
