use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn sigmak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmak")).args(args).env_remove("SIGMAK_SEED").output().expect("binary runs")
}

fn sigmak_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sigmak"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn approx(report: &Value) -> Vec<String> {
    report["chain"].as_array().unwrap().iter().map(|e| e["approx"].as_str().unwrap().to_string()).collect()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

#[test]
fn certify_matches_golden_reports() {
    for (input, expected) in [
        ("quintic.json", "certify_quintic.golden.json"),
        ("quintic_dominant.json", "certify_quintic_dominant.golden.json"),
    ] {
        let out = sigmak(&["certify", &data(input)]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(expected), "{input}");
    }
}

#[test]
fn certify_chains() {
    let r = json(&sigmak(&["certify", &data("quintic.json")]));
    assert_eq!(r["verdict"], "strictly-stable-convex");
    assert_eq!(approx(&r), ["11.632", "9.306", "6.909", "4.359", "0.000"]);
    assert_eq!(r["schema_version"], "1");

    let r = json(&sigmak(&["certify", &data("quintic_dominant.json")]));
    assert_eq!(approx(&r), ["15.250", "11.673", "8.066", "4.359", "0.000"]);
}

#[test]
fn interval_brackets_the_printed_value() {
    let r = json(&sigmak(&["certify", "--digits", "5", &data("quintic.json")]));
    for entry in r["chain"].as_array().unwrap() {
        let iv = entry["interval"].as_array().unwrap();
        let as_f64 = |s: &str| match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
            None => s.parse::<f64>().unwrap(),
        };
        let lo = as_f64(iv[0].as_str().unwrap());
        let hi = as_f64(iv[1].as_str().unwrap());
        let a: f64 = entry["approx"].as_str().unwrap().parse().unwrap();
        assert!(lo <= hi);
        assert!((a - lo).abs() <= 5e-6 && (a - hi).abs() <= 5e-6, "{entry}");
    }
}

#[test]
fn certify_reads_stdin_and_reports_instability() {
    let out = sigmak_stdin(&["certify"], r#"{"n": 2, "c": ["-1", "0"]}"#);
    let r = json(&out);
    assert_eq!(r["verdict"], "not-stable");
    assert!(r["chain"].as_array().unwrap().is_empty());
}

#[test]
fn float_mode_is_labelled() {
    let r = json(&sigmak(&["certify", "--float", &data("quintic.json")]));
    assert_eq!(r["extras"]["mode"], "numeric (non-certificate)");
    assert_eq!(approx(&r), ["11.632", "9.306", "6.909", "4.359", "0.000"]);
    assert!(r["chain"][0].get("interval").is_none());
}

#[test]
fn timings_only_on_request() {
    let plain = json(&sigmak(&["certify", &data("quintic.json")]));
    assert!(plain.get("timings").is_none());
    let timed = json(&sigmak(&["certify", "--timings", &data("quintic.json")]));
    assert!(timed["timings"]["certify_ms"].as_f64().is_some());
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["certify".to_string(), data("quintic_dominant.json")],
        vec!["convexity".to_string(), data("quintic.json"), "--pairs".into(), "50".into()],
        vec!["alpha".to_string(), data("quintic.json"), "--samples".into(), "40".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = sigmak(&args);
        let b = sigmak(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_changes_sampling_only_through_the_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_sigmak"))
            .args(["convexity", &data("quintic.json"), "--pairs", "20"])
            .env("SIGMAK_SEED", seed)
            .output()
            .unwrap()
    };
    let r = json(&run("7"));
    assert_eq!(r["extras"]["seed"], 7);
    assert_eq!(r["extras"]["failures"], 0);
    assert_eq!(run("x").status.code(), Some(2));
}

#[test]
fn dominance_golden_and_cases() {
    let out = sigmak(&["dominance", &data("quintic_dominant.json"), &data("quintic.json")]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("dominance.golden.json"));

    let r = json(&sigmak(&["dominance", &data("quintic_dominant.json"), &data("quintic.json")]));
    assert_eq!(r["extras"]["dominates"], true);
    assert_eq!(r["extras"]["levels"], serde_json::json!([">", ">", ">", "=", "="]));

    let same = json(&sigmak(&["dominance", &data("quintic.json"), &data("quintic.json")]));
    assert_eq!(same["extras"]["dominates"], true);

    let reversed = json(&sigmak(&["dominance", &data("quintic.json"), &data("quintic_dominant.json")]));
    assert_eq!(reversed["extras"]["dominates"], false);
    assert_eq!(reversed["verdict"], "does-not-dominate");
}

#[test]
fn dominance_requires_stable_equations() {
    let out = sigmak(&["dominance", &data("not_stable.json"), &data("monge_ampere_2.json")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn membership_cases() {
    let r = json(&sigmak(&["membership", &data("monge_ampere_2.json"), "--point", "2,2"]));
    assert_eq!(r["extras"]["member_of"], 0);
    assert_eq!(r["extras"]["c-subsolution"], true);

    let r = json(&sigmak(&["membership", &data("quintic.json"), "--point", "5,5,5,5,5"]));
    assert_eq!(r["extras"]["member_of"], 3);
    assert_eq!(r["extras"]["c-subsolution"], false);

    let f = json(&sigmak(&["membership", &data("quintic.json"), "--point", "5,5,5,5,5", "--float"]));
    assert_eq!(f["extras"]["member_of"], 3);
    assert_eq!(f["extras"]["mode"], "numeric (non-certificate)");
}

#[test]
fn exit_codes() {
    assert_eq!(sigmak(&["membership", &data("quintic.json"), "--point", "1,2"]).status.code(), Some(2));
    assert_eq!(sigmak(&["alpha", &data("quintic.json"), "--samples", "0"]).status.code(), Some(2));
    assert_eq!(sigmak(&["preset", "nope", "3"]).status.code(), Some(2));
    assert_eq!(sigmak(&["certify", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(sigmak_stdin(&["certify"], "{\"n\": 3, \"c\": [\"1\"]}").status.code(), Some(2));
    assert_eq!(sigmak_stdin(&["certify"], "not json").status.code(), Some(2));
    assert_eq!(sigmak(&["frobnicate"]).status.code(), Some(2));
    // A well formed equation that is not stable violates the membership precondition.
    let out = sigmak(&["membership", &data("not_stable.json"), "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn alpha_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("alpha.csv");
    let r = json(&sigmak(&[
        "alpha",
        &data("quintic.json"),
        "--range",
        "11.7:18",
        "--samples",
        "64",
        "--csv",
        csv.to_str().unwrap(),
    ]));
    assert_eq!(r["extras"]["limit"], "4/5");
    assert_eq!(r["extras"]["range_nondecreasing"], true);
    assert_eq!(r["extras"]["range_below_limit"], true);
    assert_eq!(r["extras"]["monotonicity"]["passed"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,alpha"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 64);
    assert!(values.iter().all(|a| *a < 0.8));
}

#[test]
fn alpha_accepts_an_explicit_polynomial() {
    let r = json(&sigmak(&["alpha", "--poly", "1275,-260,-24,0,1", "--range", "5:20", "--samples", "30"]));
    assert_eq!(r["extras"]["limit"], "3/4");
    assert_eq!(r["verdict"], "right-noetherian");
    assert_eq!(r["extras"]["monotonicity"]["endpoint_ok"], true);
}

#[test]
fn deform_writes_descending_family() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("deform.csv");
    let r = json(&sigmak(&[
        "deform",
        "--poly",
        "1275,-260,-24,0,1",
        "--ys",
        "2.25:5:0.75",
        "--x-max",
        "8.4",
        "--samples",
        "40",
        "--csv",
        csv.to_str().unwrap(),
    ]));
    assert_eq!(r["verdict"], "descending-in-y");
    assert_eq!(r["extras"]["failures"], 0);
    assert_eq!(r["extras"]["multiplicity"], 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,alpha"));
    assert_eq!(text.lines().count(), 1 + 4 * 40);
}

#[test]
fn presets() {
    let out = sigmak(&["preset", "monge-ampere", "3", "1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"n":3,"c":["1","0","0"]}"#);

    let d = json(&sigmak(&["preset", "dhym", "3", "3/4pi", "--precision", "12"]));
    assert_eq!(d["branch"], "supercritical");
    assert_eq!(d["c"], serde_json::json!(["1", "1", "-1"]));
    let chain: Vec<f64> = d["expected_chain"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().parse().unwrap()).collect();
    let expected: Vec<f64> = (0..3).map(|k| ((0.75 * std::f64::consts::PI - k as f64 * std::f64::consts::FRAC_PI_2) / (3 - k) as f64).tan()).collect();
    for (a, b) in chain.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-11);
    }

    let mirror = json(&sigmak(&["preset", "dhym", "3", "--", "-3/4pi"]));
    assert_eq!(mirror["branch"], "mirror");

    assert_eq!(sigmak(&["preset", "dhym", "3", "1/4pi"]).status.code(), Some(3));
    assert_eq!(sigmak(&["preset", "monge-ampere", "3"]).status.code(), Some(2));
    assert_eq!(sigmak(&["preset", "monge-ampere", "3", "-1"]).status.code(), Some(3));
}

#[test]
fn preset_output_pipes_into_certify() {
    let cases: [&[&str]; 7] = [
        &["monge-ampere", "4", "2"],
        &["j-equation", "3", "1"],
        &["hessian", "4", "2", "3"],
        &["nonneg", "3", "1", "0", "--top", "0"],
        &["guan-zhang", "3", "1", "2", "--top", "-1/2"],
        &["dhym", "4", "5/4pi"],
        &["dhym", "3", "3/4pi", "--precision", "12"],
    ];
    for args in cases {
        let mut full = vec!["preset"];
        full.extend_from_slice(args);
        let out = sigmak(&full);
        assert!(out.status.success(), "{args:?}");
        let r = json(&sigmak_stdin(&["certify"], &String::from_utf8(out.stdout).unwrap()));
        assert_eq!(r["verdict"], "strictly-stable-convex", "{args:?}");
    }
}

#[test]
fn convexity_report() {
    let r = json(&sigmak(&["convexity", &data("quintic.json"), "--pairs", "100"]));
    assert_eq!(r["extras"]["failures"], 0);
    assert_eq!(r["extras"]["seed"], 0);
    assert_eq!(r["extras"]["hessian"]["label"], "conjecture-exploration");
    assert!(r["extras"]["diagonal_scalar"].as_array().unwrap().iter().all(|d| d["positive"] == true));
    assert_eq!(sigmak(&["convexity", &data("not_stable.json")]).status.code(), Some(3));
}
