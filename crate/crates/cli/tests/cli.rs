use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn unclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unclab")).args(args).env_remove("UNCLAB_DEFAULT_TOL").output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = unclab(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (v, out.status.code().unwrap())
}

fn triangle_csv(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("tri.csv");
    let mut text = String::from("x,psi\n");
    let n = 2001;
    for i in 0..n {
        let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        text.push_str(&format!("{x},{}\n", 1.5f64.sqrt() * (1.0 - x.abs())));
    }
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_names_every_selector() {
    let (v, code) = json(&["list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["states"].as_array().unwrap().iter().map(|s| s["state"].as_str().unwrap()).collect();
    assert_eq!(names, ["idw", "ho", "srm", "morse", "delta-well", "delta-in-box", "lorentzian", "tabulated"]);
}

#[test]
fn uncertainty_schema_and_values() {
    let (v, code) = json(&["uncertainty", "delta-well", "--alpha", "3"]);
    assert_eq!(code, 0);
    assert!((v["U"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-9);
    assert_eq!(v["params"]["alpha"].as_f64(), Some(3.0));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(&keys[..8], ["state", "params", "dx", "dp", "U", "routes", "heisenberg_ok", "discrepancy"]);
    let routes = v["routes"].as_array().unwrap();
    assert_eq!(routes.len(), 2);
    assert!(routes.iter().all(|r| r["name"].is_string() && r["U"].is_f64() && r["est_error"].is_f64()));
    assert!(v["meta"]["tool"].as_str().unwrap().starts_with("unclab"));

    let (v, _) = json(&["uncertainty", "srm", "--s", "2"]);
    assert!((v["U"].as_f64().unwrap() - 0.507_911_042_151_369_7).abs() < 1e-12);
}

#[test]
fn momentum_route_on_request() {
    let (v, code) = json(&["uncertainty", "delta-in-box", "--a", "2", "--momentum"]);
    assert_eq!(code, 0);
    assert_eq!(v["routes"].as_array().unwrap().len(), 3);
    assert_eq!(v["momentum"]["p_max"].as_f64(), Some(250.0));
    assert!((v["routes"][2]["U"].as_f64().unwrap() - 0.3f64.sqrt()).abs() < 1e-3);
}

#[test]
fn tabulated_state_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = triangle_csv(&dir);
    let (v, code) = json(&["uncertainty", "tabulated", "--file", &path, "--kinks", "0"]);
    assert_eq!(code, 0);
    assert!((v["U"].as_f64().unwrap() - 0.3f64.sqrt()).abs() < 1e-3);

    let (v, code) = json(&["ingest", "--file", &path, "--kinks", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["samples"].as_u64(), Some(2001));
    assert_eq!(v["kinks"].as_array().unwrap().len(), 1);
    assert_eq!(v["walls"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "x,phi\n0,1\n").unwrap();
    let tri = triangle_csv(&dir);
    let cases: Vec<Vec<&str>> = vec![
        vec!["uncertainty", "square-well"],
        vec!["uncertainty", "delta-well", "--alpha", "-1"],
        vec!["uncertainty", "delta-well", "--s", "2"],
        vec!["uncertainty", "srm", "--s", "3"],
        vec!["uncertainty", "tabulated"],
        vec!["uncertainty", "tabulated", "--file", bad.to_str().unwrap()],
        vec!["uncertainty", "tabulated", "--file", &tri, "--kinks", "0.0003"],
        vec!["uncertainty", "ho", "--tol", "0"],
        vec!["limits", "ho"],
        vec!["limits", "morse", "--min", "0.4"],
        vec!["fourier", "ho", "--samples", "1"],
        vec!["fourier", "ho", "--pmax", "-3"],
        vec!["table1", "--threads", "0"],
    ];
    for args in cases {
        let out = unclab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn tolerance_flag_beats_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_unclab"));
        cmd.args(["uncertainty", "delta-well", "--alpha", "3"]).env_remove("UNCLAB_DEFAULT_TOL");
        if let Some(e) = env {
            cmd.env("UNCLAB_DEFAULT_TOL", e);
        }
        if let Some(f) = flag {
            cmd.args(["--tol", f]);
        }
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(run(None, None), 0);
    // the closed-form deviation here is a few ulp, far above 1e-30
    assert_eq!(run(Some("1e-30"), None), 1);
    assert_eq!(run(Some("1e-30"), Some("1e-6")), 0);
    assert_eq!(run(Some("zero"), None), 2);
}

#[test]
fn limits_surface_the_scan() {
    let (v, code) = json(&["limits", "morse"]);
    assert_eq!(code, 0);
    let excess = v["excess"].as_array().unwrap();
    assert_eq!(excess.len(), 20);
    assert!(excess.last().unwrap().as_f64().unwrap() <= 1e-6);
    assert!((v["fitted_exponent"].as_f64().unwrap() + 1.0).abs() < 0.05);

    let (v, _) = json(&["limits", "srm"]);
    assert!(v["excess"].as_array().unwrap().last().unwrap().as_f64().unwrap() <= 1e-6);
    assert!((v["fitted_exponent"].as_f64().unwrap() + 2.0).abs() < 0.05);
}

#[test]
fn fourier_profiles() {
    let (v, code) = json(&["fourier", "srm", "--s", "1", "--pmax", "10"]);
    assert_eq!(code, 0);
    assert!(v["closed_residual"]["max_modulus"].as_f64().unwrap() <= 1e-8);

    let (v, _) = json(&["fourier", "idw", "--a", "1", "--pmax", "50"]);
    assert!(v["parseval_defect"].as_f64().unwrap() <= 1e-4);

    let out = unclab(&["fourier", "ho", "--pmax", "10", "--samples", "41", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["p", "re_phi", "im_phi", "abs_phi_sq"]);
    let mut rows = 0;
    for rec in rdr.deserialize::<(f64, f64, f64, f64)>() {
        let (p, re, im, _) = rec.unwrap();
        let exact = (-0.5 * p * p).exp() / PI.powf(0.25);
        assert!((re.hypot(im) - exact).abs() < 1e-10, "p={p}");
        rows += 1;
    }
    assert_eq!(rows, 41);
}

#[test]
fn table1_passes_every_row() {
    let (v, code) = json(&["table1"]);
    assert_eq!(code, 0, "{v}");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let u6 = rows[5]["routes"][0]["U"].as_f64().unwrap();
    assert!((u6 - 0.5f64.sqrt()).abs() < 1e-8);
    let u7 = rows[6]["routes"][0]["U"].as_f64().unwrap();
    assert!((u7 - 0.3f64.sqrt()).abs() < 1e-8);
    assert!(rows.iter().all(|r| r["routes"].as_array().unwrap().len() == 3));
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["json", "csv"] {
        let mut files = Vec::new();
        for (run, threads) in [(0, "1"), (1, "1"), (2, "3")] {
            let path = dir.path().join(format!("{run}.{fmt}"));
            let out = unclab(&["fourier", "delta-well", "--pmax", "40", "--samples", "33", "--format", fmt, "--threads", threads, "--no-meta", "--output", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0));
            files.push(fs::read(&path).unwrap());
        }
        // repeated runs and a different thread count give identical bytes
        assert_eq!(files[0], files[1]);
        assert_eq!(files[0], files[2]);
    }
    let one = unclab(&["limits", "srm", "--format", "csv", "--no-meta", "--threads", "1"]).stdout;
    let four = unclab(&["limits", "srm", "--format", "csv", "--no-meta", "--threads", "4"]).stdout;
    assert_eq!(one, four);
}

#[test]
fn json_floats_carry_seventeen_digits() {
    let out = unclab(&["uncertainty", "ho", "--format", "json", "--no-meta"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("\"meta\""));
    let line = text.lines().find(|l| l.trim_start().starts_with("\"dx\"")).unwrap();
    let mantissa = line.split(':').nth(1).unwrap().trim().trim_end_matches(',').split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{line}");
}

#[test]
fn check_all_counts_failures() {
    let out = unclab(&["check-all"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let failures = text.lines().filter(|l| l.contains("[FAIL]")).count();
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion")).count(), 10);
    assert_eq!(out.status.code(), Some(failures as i32), "{text}");
}
