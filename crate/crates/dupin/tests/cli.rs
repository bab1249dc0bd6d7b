use std::process::Command;

fn dupin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dupin")).args(args).output().unwrap()
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = dupin(&["verify", "--suite", "angle_solvers", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["run"]["seed"], 3);
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn verify_csv_to_stdout() {
    let out = dupin(&["verify", "--suite", "isometry_reduction", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,case_id,status"));
}

#[test]
fn failing_cases_exit_with_one() {
    let out = dupin(&["verify", "--suite", "cross_ratio_identity", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(dupin(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(dupin(&["verify", "--suite", "all", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(dupin(&["family", "--g", "5"]).status.code(), Some(2));
    assert_eq!(dupin(&["family", "--g", "4", "--theta", "0.5"]).status.code(), Some(2));
    assert_eq!(dupin(&["solve-angles", "--g", "3"]).status.code(), Some(2));
    assert_eq!(dupin(&["search", "--g", "4", "--constraints", "cmc,xyz"]).status.code(), Some(2));
    assert_eq!(dupin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nope").join("r.json");
    let out = dupin(&["verify", "--suite", "angle_solvers", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn polygon_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let csv = dir.path().join("p.csv");
    let out = dupin(&["polygon", "--g", "4", "--theta", "-0.2", "--svg", svg.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["links_hold"], true);
    for x in v["lie_curvatures"]["adjacent"].as_array().unwrap() {
        assert!((x.as_f64().unwrap() + 1.0).abs() < 1e-10);
    }
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<line ").count(), 16);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 9);
}

#[test]
fn family_solve_and_dji_print_json() {
    let v: serde_json::Value = serde_json::from_slice(&dupin(&["family", "--g", "6", "--m1", "2", "--m2", "2"]).stdout).unwrap();
    assert_eq!(v["dimension"], 13);
    let out = dupin(&["solve-angles", "--g", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for x in v["gaps"]["odd"].as_array().unwrap() {
        assert!((x.as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
    }
    let out = dupin(&["dji", "--g", "4", "--constraints", "cmc,csc", "--theta", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kernel_dimension"], 0);
}

#[test]
fn search_reports_only_parallel_survivors() {
    let out = dupin(&["search", "--g", "4", "--constraints", "cmc,clc", "--grid", "6", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["non_parallel"], 0);
    assert_eq!(v["starts"], 36);
}
