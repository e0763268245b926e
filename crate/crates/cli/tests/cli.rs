use std::process::{Command, Output};

use serde_json::Value;

const ONE_MINUS_Z: &str = r#"{"family":"one_minus_z_pow","params":{"N":1}}"#;
const CUBE: &str = r#"{"family":"one_plus_z_pow","params":{"N":3}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optapprox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optapprox"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("error JSON on stderr")
}

#[test]
fn exact_approximant_of_the_cube() {
    let v = stdout_json(&run(&[
        "approximant",
        "--f",
        CUBE,
        "--alpha",
        "-2",
        "--n",
        "1",
        "--backend",
        "exact",
    ]));
    assert_eq!(v["coefficients"], serde_json::json!(["741/1694", "-775/1694"]));
    assert_eq!(v["p0"], "741/1694");
    assert_eq!(v["backend"], "exact");
    assert_eq!(v["alpha"], -2.0);
    for key in ["n", "effective_degree", "distance_sq", "zeros", "tail_error_bound"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn approximant_range_is_an_array() {
    let v = stdout_json(&run(&[
        "approximant",
        "--f",
        CUBE,
        "--alpha",
        "-2",
        "--n-range",
        "1..3",
        "--backend",
        "exact",
    ]));
    let a = v.as_array().unwrap();
    assert_eq!(a.len(), 3);
    assert_eq!(
        a[1]["coefficients"],
        serde_json::json!(["961/1638", "-1571/1638", "172/273"])
    );
    assert_eq!(a[2]["coefficients"][0], "571/826");
}

#[test]
fn zero_sweep_of_one_minus_z() {
    let out = run(&["zeros", "--f", ONE_MINUS_Z, "--alpha", "0", "--n-range", "0..50"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,root_index,re,im,modulus"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), (1..=50).sum::<usize>());
    let mut groups: Vec<u32> = rows.iter().map(|r| r[0] as u32).collect();
    groups.dedup();
    assert_eq!(groups, (1..=50).collect::<Vec<_>>());
    assert!(rows.iter().all(|r| r[4] > 1.0));
}

#[test]
fn csv_rows_match_effective_degrees() {
    let f = r#"{"coefficients":["1","0.5",{"re":0,"im":"0.25"},"-0.125"]}"#;
    let csv = run(&["zeros", "--f", f, "--alpha", "-1", "--n-range", "0..9"]);
    let rows = String::from_utf8(csv.stdout).unwrap().lines().count() - 1;
    let v = stdout_json(&run(&["approximant", "--f", f, "--alpha", "-1", "--n-range", "0..9"]));
    let total: u64 = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["effective_degree"].as_u64().unwrap())
        .sum();
    assert_eq!(rows as u64, total);
}

#[test]
fn zeros_json_groups_by_degree() {
    let v = stdout_json(&run(&[
        "zeros",
        "--f",
        ONE_MINUS_Z,
        "--n-range",
        "2..3",
        "--format",
        "json",
    ]));
    let sweep = v["sweep"].as_array().unwrap();
    assert_eq!(sweep.len(), 2);
    assert_eq!(sweep[1]["roots"].as_array().unwrap().len(), 3);
}

#[test]
fn blaschke_distances_plateau() {
    let f = r#"{"family":"blaschke","params":{"lambda":{"re":0.5,"im":0}}}"#;
    let v = stdout_json(&run(&["cyclicity", "--f", f, "--alpha", "0", "--max-n", "30"]));
    let d = v["distances"].as_array().unwrap();
    assert_eq!(d.len(), 31);
    assert!(d.iter().all(|x| (x.as_f64().unwrap() - 0.75).abs() < 1e-12));
    assert_eq!(v["trend"], "plateaued");
}

#[test]
fn exact_output_is_byte_identical() {
    let args = [
        "approximant",
        "--f",
        CUBE,
        "--alpha",
        "-2",
        "--n-range",
        "0..6",
        "--backend",
        "exact",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run_env(&args, "APPROX_THREADS", "1");
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.csv");
    let out = run(&[
        "zeros",
        "--f",
        ONE_MINUS_Z,
        "--n-range",
        "1..4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap().lines().count(),
        1 + 1 + 2 + 3 + 4
    );
}

#[test]
fn invalid_spec_exits_with_validation_error() {
    let out = run(&["approximant", "--f", r#"{"family":"nope"}"#, "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "spec-validation");
    assert_eq!(e["error"]["module"], "families");
    assert!(out.stdout.is_empty());
}

#[test]
fn exact_backend_needs_rational_spec_and_integer_alpha() {
    let eta = r#"{"family":"eta_family","params":{"eta":1}}"#;
    let out = run(&["approximant", "--f", eta, "--n", "1", "--backend", "exact"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "backend-mismatch");
    let out = run(&[
        "approximant",
        "--f",
        CUBE,
        "--n",
        "1",
        "--alpha",
        "0.5",
        "--backend",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "backend-mismatch");
}

#[test]
fn usage_errors() {
    for args in [
        vec!["zeros", "--f", ONE_MINUS_Z, "--n-range", "5..2"],
        vec!["zeros", "--f", ONE_MINUS_Z],
        vec!["approximant", "--f", ONE_MINUS_Z, "--n", "1", "--alpha", "nan"],
        vec!["kernel", "--f", ONE_MINUS_Z, "--n", "1", "--format", "csv"],
        vec!["verify", "--only", "nope"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_json(&out)["error"]["kind"].is_string());
    }
    let out = run_env(&["zeros", "--f", ONE_MINUS_Z, "--n", "1"], "APPROX_THREADS", "0");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn levinson_requires_hardy_space() {
    let out = run(&["levinson", "--f", ONE_MINUS_Z, "--n", "3", "--alpha", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "unsupported-alpha");
}

#[test]
fn levinson_for_one_minus_z() {
    let v = stdout_json(&run(&[
        "levinson",
        "--f",
        ONE_MINUS_Z,
        "--n",
        "3",
        "--backend",
        "exact",
    ]));
    assert_eq!(v["gammas"], serde_json::json!(["-1/2", "-1/3", "-1/4"]));
    assert_eq!(v["coefficients"], serde_json::json!(["4/5", "3/5", "2/5", "1/5"]));
    assert_eq!(
        v["outer_criterion"]["partial_products"],
        serde_json::json!(["3/4", "2/3", "5/8"])
    );
    assert_eq!(v["outer_criterion"]["target"], "1/2");
}

#[test]
fn numerical_breakdown_exits_with_three() {
    let f = r#"{"family":"one_minus_z_pow","params":{"N":6}}"#;
    let out = run(&["orthopoly", "--f", f, "--alpha", "2", "--n", "60"]);
    assert_eq!(out.status.code(), Some(3));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "instability");
    assert_eq!(e["error"]["module"], "orthopoly");
}

#[test]
fn orthopoly_and_kernel_reports() {
    let f = r#"{"coefficients":["1","-1/2"]}"#;
    let v = stdout_json(&run(&["orthopoly", "--f", f, "--n", "2", "--backend", "exact"]));
    assert_eq!(v["norms_sq"][0], "5/4");
    assert_eq!(v["szego_residual"], 0.0);
    assert_eq!(
        v["approximant"],
        stdout_json(&run(&["approximant", "--f", f, "--n", "2", "--backend", "exact"]))["coefficients"]
    );

    let v = stdout_json(&run(&[
        "kernel",
        "--f",
        f,
        "--n",
        "2",
        "--backend",
        "exact",
        "--alpha",
        "-1",
    ]));
    // K_n(0, 0) = p_n(0) f(0) = 1 - d_n^2.
    let d = stdout_json(&run(&[
        "approximant",
        "--f",
        f,
        "--n",
        "2",
        "--backend",
        "exact",
        "--alpha",
        "-1",
    ]))["distance_sq"]
        .as_str()
        .unwrap()
        .to_string();
    let (num, den) = d.split_once('/').unwrap();
    let (num, den): (i64, i64) = (num.parse().unwrap(), den.parse().unwrap());
    assert_eq!(v["value"], format!("{}/{}", den - num, den));
    assert!(v["mccarthy"].is_object());
    assert!((v["extremal"]["g_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn first_zero_of_a_polynomial_and_a_series() {
    let v = stdout_json(&run(&["first-zero", "--f", ONE_MINUS_Z, "--backend", "exact"]));
    assert_eq!(v["value"], "-2");
    assert!(v["estimate"].is_null());
    let v = stdout_json(&run(&["first-zero", "--f", r#"{"coefficients":["1"]}"#]));
    assert_eq!(v["value"], "infinity");
    let f = r#"{"family":"eta_family","params":{"eta":1,"truncation":4096}}"#;
    let v = stdout_json(&run(&["first-zero", "--f", f, "--alpha", "-2", "--start", "256"]));
    assert_eq!(v["estimate"]["lengths"].as_array().unwrap().len(), 5);
    assert_eq!(v["estimate"]["monotone"], true);
}

#[test]
fn verify_subset_and_negative_control() {
    let out = run(&["verify", "--only", "cube-exact,zero-location"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("check"));
    assert_eq!(text.lines().filter(|l| l.starts_with("zero-location")).count(), 7);

    let out = run(&[
        "verify",
        "--only",
        "cube-exact",
        "--inject-perturbation",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
}
