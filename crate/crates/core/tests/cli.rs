use std::process::Command;

use serde_json::Value;

fn boundent(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_boundent"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn negativity_one_copy_one_singlet() {
    let (code, json, _) = boundent(&["negativity", "--copies", "1", "--singlets", "1"]);
    assert_eq!(code, 0);
    assert!((json["results"]["value_bits"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(json["command"], "negativity");
}

#[test]
fn alpha1_with_seed() {
    let (code, json, _) = boundent(&["alpha1", "--restarts", "200", "--seed", "7"]);
    assert_eq!(code, 0);
    let alpha = json["results"]["alpha1_hat"].as_f64().unwrap();
    assert!(alpha < 1.0);
    assert_eq!(json["config_echo"]["seed"], 7);
    assert_eq!(json["config_echo"]["restarts_n1"], 200);
}

#[test]
fn induction_single_copy() {
    let (code, json, _) = boundent(&["induction", "--n", "1", "--beta", "0.9"]);
    assert_eq!(code, 0);
    let check = &json["results"]["check"];
    assert_eq!(check["pass"], true);
    assert!(check["min_eig"].as_f64().unwrap() >= -1e-10);
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, _) = boundent(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, err) = boundent(&["induction", "--n", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("--n"), "{err}");
    let (code, _, _) = boundent(&["negativity", "--copies", "many"]);
    assert_eq!(code, 2);
    let (code, _, _) = boundent(&["alpha1", "--tol", "0.5"]);
    assert_eq!(code, 2);
}

#[test]
fn reproduce_is_deterministic_and_degrades_under_small_budget() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"dim_limit": 81, "restarts_n2": 100}"#).unwrap();
    let out = dir.path().join("report.json");
    let args = ["reproduce", "--seed", "42", "--config", cfg.to_str().unwrap()];

    let (code, first, _) = boundent(&args);
    assert_eq!(code, 0);
    let (_, second, _) = boundent(&args);
    assert_eq!(without_timing(first.clone()), without_timing(second));

    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    let (code, stdout_json, _) = boundent(&with_out);
    assert_eq!(code, 0);
    assert_eq!(stdout_json, Value::Null);
    let from_file: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(without_timing(from_file), without_timing(first.clone()));

    let skipped: Vec<&str> = first["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "skipped")
        .map(|c| c["claim"].as_str().unwrap())
        .collect();
    assert!(skipped.contains(&"induction N=2"), "{skipped:?}");
    assert!(skipped.iter().any(|c| c.contains("rho_b^2")), "{skipped:?}");
    assert_eq!(first["config_echo"]["dim_limit"], 81);
}

#[test]
fn explicit_flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 1, "restarts_n1": 5}"#).unwrap();
    let (code, json, _) = boundent(&["certificate", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(code, 0);
    assert_eq!(json["config_echo"]["seed"], 9);
    assert_eq!(json["config_echo"]["restarts_n1"], 5);
    assert_eq!(json["results"]["certificate"]["terms"].as_array().unwrap().len(), 13);
}
