use std::path::PathBuf;
use std::process::{Command, Output};

fn sublin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublin")).args(args).output().expect("binary runs")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sublin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn body_json(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("body JSON")
}

fn extent_x(body: &serde_json::Value) -> f64 {
    body["vertices"].as_array().unwrap().iter().map(|v| v[0].as_f64().unwrap()).fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn l1_ball_and_box_extents() {
    let l1 = scratch("l1.json", r#"{"type":"l1ball","center":[0,0],"radius":1}"#);
    let boxed = scratch("box.json", r#"{"type":"box","center":[0,0],"half_widths":[0.8,0.1]}"#);
    let spec = r#"{"type":"avg_quantile","alpha":0.5}"#;
    let svg = std::env::temp_dir().join(format!("sublin-cli-{}/l1.svg", std::process::id()));

    let out = sublin(&["body", l1.to_str().unwrap(), spec, "--svg", svg.to_str().unwrap()]);
    let b = body_json(&out);
    let gap = b["gap"].as_f64().unwrap();
    assert!((extent_x(&b) - 1.0 / 3.0).abs() <= gap + 1e-9);
    let angles = b["support"]["angles"].as_array().unwrap();
    assert_eq!(angles.len(), 720);
    assert!((b["support"]["values"][0].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let b = body_json(&sublin(&["body", boxed.to_str().unwrap(), "--alpha", "0.5"]));
    assert!((b["support"]["values"][0].as_f64().unwrap() - 0.4).abs() < 1e-12);
}

#[test]
fn mean_body_is_the_barycenter() {
    let tri = scratch("tri.json", r#"{"type":"polygon","vertices":[[0,0],[3,0],[0,3]]}"#);
    let b = body_json(&sublin(&["body", tri.to_str().unwrap(), r#"{"type":"mean"}"#, "--grid", "64"]));
    let v = b["vertices"].as_array().unwrap();
    assert_eq!(v.len(), 1);
    assert!((v[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12 && (v[0][1].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn samples_and_depth() {
    let pts = scratch("pts.json", r#"{"points":[[1,1],[-1,1],[-1,-1],[1,-1]]}"#);
    let b = body_json(&sublin(&["body", pts.to_str().unwrap(), "--alpha", "0.25"]));
    assert!((extent_x(&b) - 1.0).abs() < 1e-12);
    let d = body_json(&sublin(&["depth", pts.to_str().unwrap(), "--alpha", "0.3"]));
    assert!(d["vertices"].is_array());
    let d = body_json(&sublin(&["depth", pts.to_str().unwrap(), "--alpha", "0.9"]));
    assert_eq!(d, serde_json::json!({"empty": true}));
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.json", "{ not json");
    assert_eq!(sublin(&["body", bad.to_str().unwrap(), "--alpha", "0.5"]).status.code(), Some(2));
    assert_eq!(sublin(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(sublin(&["experiment", "nonmonotone", "--alpha", "2"]).status.code(), Some(2));
    assert_eq!(sublin(&["--help"]).status.code(), Some(0));
    assert_eq!(sublin(&["verify", "duals", "--seed", "1"]).status.code(), Some(0));
    // an impossible tolerance turns a passing suite into a verification failure
    assert_eq!(sublin(&["verify", "duals", "--tol", "0"]).status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let run = || sublin(&["verify", "axioms", "--seed", "7", "--count", "50"]).stdout;
    let first = run();
    assert_eq!(first, run());
    let r: serde_json::Value = serde_json::from_slice(&first).unwrap();
    for key in ["suite", "checks", "seed", "params"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    let c = &r["checks"][0];
    for key in ["name", "pass", "value", "tolerance"] {
        assert!(c.get(key).is_some(), "missing check field {key}");
    }
    let dir = std::env::temp_dir().join(format!("sublin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svgs: Vec<String> = (0..2)
        .map(|i| {
            let p = dir.join(format!("nm{i}.svg"));
            assert_eq!(sublin(&["experiment", "nonmonotone", "--svg", p.to_str().unwrap(), "--out", "/dev/null"]).status.code(), Some(0));
            std::fs::read_to_string(p).unwrap()
        })
        .collect();
    assert_eq!(svgs[0], svgs[1]);
}
