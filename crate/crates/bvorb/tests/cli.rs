use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["bvorb"];
    argv.extend_from_slice(args);
    let code = bvorb::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output.schema.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

/// Runs, checks the exit code, and validates the JSON against the schema.
fn json(args: &[&str], code: i32) -> Value {
    let (c, out, err) = run(args);
    assert_eq!(c, code, "{args:?}: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let s = schema();
    if let Err(errs) = s.validate(&v) {
        let msgs: Vec<String> = errs.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{args:?} violates the schema: {msgs:?}");
    }
    v
}

#[test]
fn gw_diamond() {
    let v = json(&["state-space", "--k3", "3,1,1,1", "--curve", "quartic", "--theory", "gw"], 0);
    assert_eq!(v["diamond"]["h11"], 6);
    assert_eq!(v["diamond"]["h21"], 60);
    assert_eq!(v["diamond"]["rows"][3], serde_json::json!([1, 60, 60, 1]));
    assert_eq!(v["total"], 136);
}

#[test]
fn fjrw_totals() {
    let v = json(&["state-space", "--theory", "fjrw", "--k3", "6,3,2,1"], 0);
    assert_eq!(v["total"], 112);
    let v = json(&["state-space", "--narrow", "--theory", "fjrw", "--k3", "5,2,2,1"], 0);
    assert_eq!(v["basis"].as_array().unwrap().len(), 12);
    assert_eq!(v["basis_scope"], "narrow");
}

#[test]
fn mixed_state_spaces_validate() {
    for t in ["mixed-fg", "mixed-gf"] {
        let v = json(&["state-space", "--theory", t, "--curve", "cubic-sextic", "--k3", "4,2,1,1"], 0);
        assert!(v["total"].as_u64().unwrap() > 0);
    }
}

#[test]
fn gw_leading_term() {
    let v = json(&["i-function", "--theory", "gw", "--max-deg", "1"], 0);
    let first = &v["terms"][0];
    assert_eq!(first["z_exponent"], 1);
    assert_eq!(first["coefficient"].as_array().unwrap().len(), 1);
    assert_eq!(first["coefficient"][0]["rational"], "1/1");
    assert_eq!(first["coefficient"][0]["dE_pow"], 0);
}

#[test]
fn fjrw_vacuum() {
    let v = json(&["i-function", "--theory", "fjrw", "--max-deg", "1"], 0);
    let t = v["terms"].as_array().unwrap().iter().find(|t| t["index"] == "n[0, 0, 0]").unwrap();
    assert_eq!(t["z_exponent"], 1);
    assert_eq!(t["coefficient"][0]["rational"], "13824/1");
    assert_eq!(t["coefficient"][0]["sector"], "J1J2");
}

#[test]
fn mixed_i_functions_validate() {
    for t in ["mixed-fg", "mixed-gf"] {
        let v = json(&["i-function", "--theory", t, "--max-deg", "1"], 0);
        assert!(!v["terms"].as_array().unwrap().is_empty());
    }
}

#[test]
fn deterministic() {
    let a = run(&["i-function", "--theory", "mixed-fg", "--max-deg", "2"]);
    let b = run(&["i-function", "--theory", "mixed-fg", "--max-deg", "2"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn csv_one_monomial_per_row() {
    let (c, out, _) = run(&["i-function", "--theory", "gw", "--max-deg", "1", "--format", "csv"]);
    assert_eq!(c, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "index,degree,z_exponent,sector,label,dE_pow,dK_pow,rational");
    let v = json(&["i-function", "--theory", "gw", "--max-deg", "1"], 0);
    let monomials: usize = v["terms"].as_array().unwrap().iter().map(|t| t["coefficient"].as_array().unwrap().len()).sum();
    assert_eq!(lines.count(), monomials);
}

#[test]
fn verify_symplectic() {
    let v = json(&["verify", "--check", "symplectic", "--k3", "3,1,1,1"], 0);
    assert_eq!(v["passed"], true);
    let d: f64 = v["max_deviation"].as_str().unwrap().parse().unwrap();
    assert!(d < 1e-40);
    assert_eq!(v["details"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_contour_three_way() {
    let v = json(&["verify", "--check", "continuation", "--k3", "3,1,1,1", "--point", "1e-3", "--prec", "192"], 0);
    let info = &v["details"][0]["info"];
    assert_eq!(info["closure"], "gw");
    let integral: f64 = info["integral"]["re"].as_str().unwrap().parse().unwrap();
    let right: f64 = info["right_sum"].as_str().unwrap().parse().unwrap();
    assert!((integral - right).abs() < 1e-15);
}

#[test]
fn verify_exact_checks() {
    for c in ["homogeneity", "oracle", "statespace-iso"] {
        let v = json(&["verify", "--check", c, "--max-deg", "2"], 0);
        assert_eq!(v["passed"], true, "{c}");
    }
}

#[test]
fn unsupported_is_four() {
    let (c, _, err) = run(&["verify", "--check", "continuation", "--curve", "cubic-sextic"]);
    assert_eq!(c, 4);
    assert!(err.contains("quartic"));
    let (c, _, _) = run(&["verify", "--check", "symplectic", "--k3", "5,2,2,1", "--side", "k"]);
    assert_eq!(c, 4);
}

#[test]
fn bad_input_is_two() {
    for args in [
        &["state-space", "--k3", "7,1,1,1"][..],
        &["state-space", "--theory", "hodge"],
        &["verify", "--check", "everything"],
        &["i-function", "--format", "xml"],
        &["state-space", "--no-such-flag"],
        &["verify", "--check", "symplectic", "--tol", "abc"],
        &["verify", "--check", "continuation", "--point", "0.015625"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
}

#[test]
fn config_file_and_override() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let cfg = dir.join("bvorb_cfg.toml");
    std::fs::write(&cfg, "[orbifold]\nk3 = [6, 3, 2, 1]\n[output]\nformat = \"json\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&["state-space", "--config", c, "--theory", "fjrw"], 0);
    assert_eq!(v["total"], 112);
    let v = json(&["state-space", "--config", c, "--theory", "fjrw", "--k3", "3,1,1,1", "--seed", "7"], 0);
    assert_eq!(v["total"], 136);
    assert_eq!(v["meta"]["seed"], 7);
    std::fs::write(&cfg, "[orbifold]\nk3 = [6, 3, 2]\n").unwrap();
    assert_eq!(run(&["state-space", "--config", c]).0, 2);
}

#[test]
fn out_path() {
    let path = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bvorb_out.json");
    let (c, out, _) = run(&["state-space", "--out", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["kind"], "state-space");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bvorb");
    let s = Command::new(bin).args(["verify", "--check", "continuation", "--curve", "cubic-sextic"]).output().unwrap();
    assert_eq!(s.status.code(), Some(4));
    let s = Command::new(bin).args(["state-space", "--narrow", "--theory", "fjrw"]).output().unwrap();
    assert_eq!(s.status.code(), Some(0));
    let s = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(s.status.code(), Some(0));
}
