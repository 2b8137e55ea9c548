use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn htjack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htjack"))
        .args(args)
        .env("HTJACK_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr is not JSON: {}", String::from_utf8_lossy(&o.stderr)))
}

#[test]
fn beta_single_root() {
    let o = htjack(&["roots", "--family", "beta", "--M", "1", "--gamma", "1", "--c", "1/2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["k,root", "1,0.5"]);
}

#[test]
fn moments_both_methods_agree() {
    let o = htjack(&["moments", "--family", "planch", "--gamma", "2", "--eta", "1", "--order", "6", "--method", "both"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ell,paths,transform"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert_eq!(r[1], r[2]);
    }
    assert_eq!(rows[1], ["2", "10/3", "10/3"]);
}

#[test]
fn explicit_kappa_moments() {
    let o = htjack(&["moments", "--gamma", "1", "--kappa", "1,1,1", "--order", "3", "--method", "paths"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().last(), Some("3,97/4"));
}

#[test]
fn cumulants_from_moments_flag() {
    let o = htjack(&["cumulants", "--gamma", "1", "--moments", "0,7/12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o2 = htjack(&["cumulants", "--family", "beta", "--gamma", "1", "--c", "1/2", "--M", "1", "--order", "2"]);
    assert_eq!(stdout(&o), stdout(&o2));
}

#[test]
fn irrelevant_and_unknown_flags_are_rejected() {
    let o = htjack(&["roots", "--family", "planch", "--gamma", "2", "--eta", "1", "--M", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "parameter");
    let o = htjack(&["roots", "--family", "planch", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    let o = htjack(&["roots", "--family", "planch", "--gamma", "0.1e1", "--eta", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn computation_failure_exits_two() {
    let o = htjack(&["density", "--family", "planch", "--gamma", "2", "--eta", "1", "--mass-tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr_json(&o);
    assert!(err["error"].is_string() && err["message"].is_string());
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_htjack"))
        .args(["roots", "--family", "beta", "--M", "1", "--gamma", "1", "--c", "1/2"])
        .env("HTJACK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn equivalence_and_gamma_product_reports() {
    let o = htjack(&["check-equivalence", "--family", "alpha", "--gamma", "1", "--c", "1/2", "--eta", "1", "--order", "8"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lmax"], 8);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["equal"] == true));
    assert_eq!(v["config"]["spec"]["family"], "alpha");

    let o = htjack(&["check-gamma-product", "--x", "3,1,1", "--theta", "1/3", "--z", "9"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["k_max", "lhs", "rhs", "abs_err"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let o = htjack(&["check-gamma-product", "--x", "3,1", "--theta", "1/3", "--z", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn qstar_methods_agree() {
    let base = ["qstar", "--x", "2,1/2,-1", "--theta", "1/3", "--k", "4"];
    let a = htjack(&base);
    let b = htjack(&[&base[..], &["--brute-force"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).lines().nth(1) == Some("0,1"));
}

#[test]
fn eigs_and_verify_spectrum() {
    let o = htjack(&["eigs", "--family", "planch", "--gamma", "2", "--eta", "1", "--count", "3", "--trunc", "400"]);
    assert!(o.status.success());
    let first: f64 = stdout(&o).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((first - 1.0).abs() < 1e-9);
    let o = htjack(&["verify-spectrum", "--family", "beta", "--gamma", "3/2", "--c", "1/3", "--M", "5"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["agreement"]["max_deviation"].as_f64().unwrap() < 1e-9);
    assert!(v["interlacing_violations"].as_array().unwrap().is_empty());
}

#[test]
fn density_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("d.json");
    let o = htjack(&["density", "--family", "planch", "--gamma", "2", "--eta", "1/2", "--out", json_path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["config"]["spec"]["eta"], "1/2");
    let intervals = v["intervals"].as_array().unwrap();
    assert_eq!(intervals[0][0], -2.0);

    let roots = htjack(&["roots", "--family", "planch", "--gamma", "2", "--eta", "1/2", "--count", "3"]);
    let l1: f64 = stdout(&roots).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((intervals[0][1].as_f64().unwrap() + l1).abs() < 1e-12);

    let svg = htjack(&["density", "--family", "planch", "--gamma", "2", "--eta", "1/2", "--format", "svg"]);
    let text = stdout(&svg);
    assert!(text.starts_with("<svg") && text.contains("<!-- config:"));

    let csv = htjack(&["density", "--family", "planch", "--gamma", "2", "--eta", "1/2", "--format", "csv", "--points", "11"]);
    assert_eq!(stdout(&csv).lines().next(), Some("x,f"));
}

#[test]
fn sample_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let (samples, diag, dens, svg) = (p("s.csv"), p("diag.json"), p("d.json"), p("o.svg"));
    let args = ["sample", "--family", "planch", "--N", "30", "--gamma", "2", "--eta", "1", "--sweeps", "3000", "--seed", "5", "--chains", "2"];
    let o = htjack(&[&args[..], &["--out", &samples, "--diagnostics", &diag]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&samples).unwrap();
    assert!(text.starts_with("# config: "));
    assert_eq!(text.lines().nth(1), Some("chain,sweep,particle_index,position"));
    let d: Value = serde_json::from_str(&fs::read_to_string(&diag).unwrap()).unwrap();
    assert_eq!(d["chains"].as_array().unwrap().len(), 2);

    let again = htjack(&args);
    assert_eq!(stdout(&again), text.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());

    htjack(&["density", "--family", "planch", "--gamma", "2", "--eta", "1", "--out", &dens]);
    let o = htjack(&["compare", "--density", &dens, "--samples", &samples, "--svg", &svg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n_samples"], 2 * 1200 * 30);
    assert!(v["ks"].as_f64().unwrap() < 0.2);
    assert!(fs::read_to_string(&svg).unwrap().contains("<rect x="));

    let o = htjack(&["sample", "--family", "beta", "--gamma", "1", "--c", "1/2", "--M", "2", "--N", "3", "--sweeps", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reproduce_figures_writes_four_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("figs");
    let args = ["reproduce-figures", "--out-dir", out.to_str().unwrap(), "--N", "40", "--sweeps", "400", "--chains", "2"];
    let o = htjack(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["figure_eta_1-2.json", "figure_eta_1-2.svg", "figure_eta_1.json", "figure_eta_1.svg"]);
    let report = fs::read_to_string(out.join("figure_eta_1.json")).unwrap();
    let v: Value = serde_json::from_str(&report).unwrap();
    assert!(v["ks"].as_f64().is_some());
    assert_eq!(v["config"]["sampler"]["N"], 40);

    let o = htjack(&args);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(out.join("figure_eta_1.json")).unwrap(), report);
}
