use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmt-autocorr")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn value_re(v: &Value) -> f64 {
    v["value"]["re"].as_f64().unwrap()
}

#[test]
fn compute_small_examples() {
    let out = run(&["compute", "--group", "usp", "--N", "1", "--shifts", "2", "--method", "eps"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((value_re(&json(&out)) - 5.0).abs() < 1e-12);

    let out = run(&["compute", "--group", "so", "--N", "1", "--shifts", "0", "--method", "schur"]);
    assert!((value_re(&json(&out)) - 1.0).abs() < 1e-12);

    let out =
        run(&["compute", "--group", "u", "--N", "2", "--m", "1", "--n", "2", "--shifts", "1,1", "--method", "schur"]);
    assert!((value_re(&json(&out)) - 3.0).abs() < 1e-12);
}

#[test]
fn comb_alias_and_alpha_input() {
    // w = e^{-α} for usp, so α = -ln 2 gives w = 2.
    let alpha = format!("{}", -(2.0f64).ln());
    let out = run(&["compute", "--group", "usp", "--N", "1", "--alpha", &alpha, "--method", "comb"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((value_re(&json(&out)) - 5.0).abs() < 1e-12);
}

#[test]
fn crosscheck_random_symplectic() {
    let out = run(&["crosscheck", "--group", "usp", "--N", "2", "--random", "2", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn crosscheck_unitary_with_quadrature() {
    let out = run(&[
        "crosscheck",
        "--group",
        "u",
        "--N",
        "3",
        "--m",
        "1",
        "--n",
        "3",
        "--shifts",
        "0.5,0.3+0.2i,1.5",
        "--routes",
        "schur,comb,quadrature",
        "--tol",
        "1e-8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["routes"].as_object().unwrap().len(), 3);
}

#[test]
fn crosscheck_orthogonal_families() {
    for group in ["so", "ominus"] {
        let out = run(&["crosscheck", "--group", group, "--N", "2", "--shifts", "0.4,0.7-0.1i"]);
        assert_eq!(out.status.code(), Some(0), "{group}");
    }
}

#[test]
fn coincident_shifts_are_numeric_errors() {
    let out = run(&["crosscheck", "--group", "usp", "--N", "2", "--shifts", "0.5,0.5", "--routes", "det,schur"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"], Value::String("NearConfluent".into()));

    let out = run(&["crosscheck", "--group", "usp", "--N", "2", "--shifts", "0.5,0.5", "--routes", "det"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["identities", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--group", "usp", "--N", "1", "--method", "eps"]).status.code(), Some(2));
    assert_eq!(
        run(&["compute", "--group", "usp", "--N", "1", "--shifts", "1+", "--method", "eps"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["compute", "--group", "u", "--N", "2", "--m", "1", "--n", "3", "--shifts", "1,1", "--method", "schur"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--threads", "0", "scaling", "--b", "0.5"]).status.code(), Some(2));
}

#[test]
fn extended_precision_rejects_transcendental_routes() {
    let out = run(&["compute", "--group", "usp", "--N", "1", "--shifts", "2", "--method", "contour", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"], Value::String("PrecisionUnsupported".into()));
}

#[test]
fn extended_precision_exact_route() {
    let out =
        run(&["compute", "--group", "usp", "--N", "2", "--shifts", "0.3,0.7", "--method", "det", "--digits", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["precision"]["mode"], Value::String("extended".into()));
    assert!(v["value"]["re_decimal"].as_str().unwrap().len() > 35);
}

#[test]
fn identities_double_and_extended() {
    let out = run(&["identities", "--trials", "10", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], Value::Bool(true));

    let out = run(&["identities", "--trials", "2", "--max-n", "3", "--digits", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for (_, r) in v["max_residuals"].as_object().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-30);
    }
}

#[test]
fn montecarlo_orthogonal_mean() {
    let out = run(&["montecarlo", "--group", "so", "--N", "1", "--shifts", "0.5", "--samples", "20000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["exact"]["re"].as_f64().unwrap() - 1.25).abs() < 1e-12);
    assert!(v["z_score"].as_f64().unwrap() <= 4.0);
}

#[test]
fn montecarlo_is_thread_count_independent() {
    let args = ["montecarlo", "--group", "usp", "--N", "2", "--shifts", "0.3,0.2i", "--samples", "5000", "--seed", "9"];
    let one = run(&[&["--threads", "1"], &args[..]].concat());
    let many = run(&args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn scaling_table() {
    let out = run(&["scaling", "--b", "0.3,0.5i", "--sizes", "10,100,1000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,ratio_re,ratio_im,abs_err"));
    let errs: Vec<f64> = lines.map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.windows(2).all(|w| w[1] < w[0]));

    let out = run(&["scaling", "--b", "1,0.5", "--sizes", "10000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let err: f64 = text.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!(err <= 2e-3);
}

#[test]
fn output_reparses_byte_identically() {
    let out = run(&["compute", "--group", "so", "--N", "2", "--shifts", "0.3,0.1-0.4i", "--method", "eps"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let back: Value = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string(&back).unwrap();
    let reparsed: Value = serde_json::from_str(&again).unwrap();
    assert_eq!(back, reparsed);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("rmt-autocorr-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = run(&[
        "--out",
        path.to_str().unwrap(),
        "compute",
        "--group",
        "usp",
        "--N",
        "1",
        "--shifts",
        "2",
        "--method",
        "det",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((value_re(&v) - 5.0).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).unwrap();
}
