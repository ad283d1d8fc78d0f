use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cwf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwf"))
        .args(args)
        .env_remove("CWF_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_weight_triangle_is_classical() {
    let out = cwf(&["verify-weight"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["pearson"]["psi1"], "1 - 3*x1");
    assert_eq!(r["pearson"]["psi2"], "1 - 3*x2");
    assert_eq!(r["pearson"]["detD"], "9");
    assert!(r["boundary"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["pass"] == true));
    assert_eq!(r["compat"][0]["pass"], true);
    assert_eq!(r["compat"][1]["pass"], false);
    assert_eq!(r["classical"], true);
    assert_eq!(r["config"]["alpha"], "0");
}

#[test]
fn verify_weight_identity_fails_on_first_edge() {
    let out = cwf(&[
        "verify-weight",
        "--phi11",
        "1",
        "--phi12",
        "0",
        "--phi22",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("boundary check failed on edge 1 (x1 = 0)"));
    let r = json(&out);
    assert_eq!(r["boundary"][0]["pass"], false);
    assert_eq!(r["classical"], false);
}

#[test]
fn verify_weight_general_factors() {
    let out = cwf(&[
        "verify-weight",
        "--factors",
        "x1:1/2; x2:2; 1 - x1 - x2:-1/3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["pearson"]["psi1"], "3/2 - 31/6*x1");
    assert_eq!(r["config"]["factors"][2]["exponent"], "-1/3");
}

#[test]
fn eig_degree_zero_is_seven_thirds() {
    let out = cwf(&["eig", "--degree", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out)["values"][0].as_f64().unwrap();
    assert!((v - 7.0 / 3.0).abs() < 1e-12);
}

#[test]
fn eig_reports_metrics() {
    let r = json(&cwf(&["eig", "--degree", "3", "--alpha", "1/2"]));
    let values: Vec<f64> = r["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 10);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert!(values[0] >= 2.0);
    assert!(r["orthogonality_defect"].as_f64().unwrap() < 1e-10);
    assert!(r["max_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn solve_recovers_manufactured_solution() {
    // L x1 for the Lebesgue weight.
    let out = cwf(&[
        "solve",
        "--degree",
        "4",
        "--f",
        "-1 + 5*x1 + x1^3 + x1*x2^2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    for t in r["solution"].as_array().unwrap() {
        let c = t["coefficient"].as_f64().unwrap();
        let target = if t["x1"] == 1 && t["x2"] == 0 {
            1.0
        } else {
            0.0
        };
        assert!((c - target).abs() < 1e-9, "{t}");
    }
}

#[test]
fn config_errors_exit_three() {
    assert_eq!(cwf(&["solve"]).status.code(), Some(3));
    assert_eq!(cwf(&["eig", "--alpha", "-1"]).status.code(), Some(3));
    assert_eq!(cwf(&["eig", "--no-such-flag"]).status.code(), Some(3));
    assert_eq!(
        cwf(&["moments", "--factors", "x1:0"]).status.code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "degree = 2\ncolour = blue\n").unwrap();
    let out = cwf(&["eig", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("unknown config key `colour`"));
}

#[test]
fn indefinite_phi_is_a_numerical_failure() {
    let out = cwf(&[
        "solve", "--f", "1", "--phi11", "-10", "--phi12", "0", "--phi22", "-10",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# sweep\nalpha = 1\ndegree = 5\n").unwrap();
    let r = json(&cwf(&[
        "eig",
        "--config",
        path.to_str().unwrap(),
        "--degree",
        "1",
    ]));
    assert_eq!(r["config"]["alpha"], "1");
    assert_eq!(r["config"]["degree"], 1);
    assert_eq!(r["values"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    let args = ["converge", "--degree-min", "0", "--degree-max", "4"];
    let a = cwf(&args);
    let b = cwf(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn converge_csv_table() {
    let out = cwf(&[
        "converge",
        "--degree-min",
        "0",
        "--degree-max",
        "3",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "degree,nu0,nu1,nu2,nu3,nu4,nu5,nu6,nu7,nu8,nu9,orthogonality_defect,lower_bound_margin"
    );
    assert_eq!(lines.len(), 5);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[1], "2.3333333333333335e0");
    assert!(first[2].is_empty());
    let last: Vec<&str> = lines[4].split(',').collect();
    assert!(last[10].parse::<f64>().unwrap() > 2.0);
}

#[test]
fn moments_and_quadrature_csv() {
    let out = cwf(&["moments", "--max-order", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,n,moment,ratio\n0,0,5.0000000000000000e-1,1\n"));
    assert!(text.contains("2,0,8.3333333333333329e-2,1/6\n"));

    let out = cwf(&["quadrature", "--nodes", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("reports");
    let out = Command::new(env!("CARGO_BIN_EXE_cwf"))
        .args(["eig", "--degree", "1", "--output", "small"])
        .env("CWF_OUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(Path::new(&target).join("small.json")).unwrap();
    assert_eq!(written, out.stdout);
}
