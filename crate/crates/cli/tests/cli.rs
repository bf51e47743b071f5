use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lytensor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lytensor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn check_ly_finds_a_witness_for_the_singlet() {
    let dir = TempDir::new().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let state = write(
        &dir,
        "s.json",
        &format!(r#"{{"n":2,"amplitudes":[[0,0],[{s},0],[-{s},0],[0,0]]}}"#),
    );
    let v = stdout_json(&lytensor(&[
        "check-ly", "--input", &state, "--radius", "1", "--budget", "500", "--seed", "3",
    ]));
    assert_eq!(v["kind"], "Falsified");
    let w = &v["witness"];
    assert!(w["max_relative_modulus"].as_f64().unwrap() < 1.0);
}

#[test]
fn check_ly_certifies_a_product_state() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "p.json", r#"{"n":1,"amplitudes":[[1,0],[0.5,0]]}"#);
    let v = stdout_json(&lytensor(&["check-ly", "--input", &state, "--radius", "1.9"]));
    assert_eq!(v["kind"], "CertifiedExact");
}

#[test]
fn roots_csv_has_small_residuals() {
    let dir = TempDir::new().unwrap();
    let state = write(
        &dir,
        "s.json",
        r#"{"n":2,"amplitudes":[[1,0],[0.3,0],[0.3,0],[0.5,0]]}"#,
    );
    let out = lytensor(&["roots", "--input", &state, "--y", "01"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,modulus,residual"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!((r[2] - 2f64.sqrt()).abs() < 1e-12);
        assert!(r[3] < 1e-12);
    }
}

#[test]
fn estimate_amplitude_reports_value_bound_and_order() {
    let dir = TempDir::new().unwrap();
    let state = write(
        &dir,
        "p.json",
        r#"{"n":3,"amplitudes":[[1,0],[0.2,0],[0.2,0],[0.04,0],[0.2,0],[0.04,0],[0.04,0],[0.008,0]]}"#,
    );
    let v = stdout_json(&lytensor(&[
        "estimate-amplitude",
        "--input",
        &state,
        "--y",
        "000",
        "--epsilon",
        "0.5",
        "--radius",
        "4.5",
    ]));
    let exact = 1.2f64.powi(3) / 8f64.sqrt();
    let re = v["value"][0].as_f64().unwrap();
    assert!(((re - exact) / exact).abs() <= 0.5);
    assert!(v["p"].as_u64().unwrap() <= 3);
    assert!(v["bound"].as_f64().unwrap() <= 0.25);
}

#[test]
fn gr_prep_writes_state_and_resource_log() {
    let dir = TempDir::new().unwrap();
    let last = (1.0f64 - 0.64 - 2.0 * 0.1296).sqrt();
    let state = write(
        &dir,
        "s.json",
        &format!(r#"{{"n":2,"amplitudes":[[0.8,0],[0.36,0],[0.36,0],[{last},0]]}}"#),
    );
    let out = dir.path().join("prepared.json");
    let log = dir.path().join("resources.csv");
    let v = stdout_json(&lytensor(&[
        "gr-prep",
        "--input",
        &state,
        "--epsilon",
        "0.1",
        "--radius",
        "1.3",
        "--out",
        &path_str(&out),
        "--log",
        &path_str(&log),
    ]));
    assert!(v["distance"].as_f64().unwrap() <= 0.1);
    let prepared: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(prepared["n"], 2);
    let log = std::fs::read_to_string(log).unwrap();
    assert!(log.starts_with("stage,level,prefix,p_required,p_used,reads,exact_fallback"));
    assert_eq!(log.lines().count(), 1 + v["queries"].as_u64().unwrap() as usize);
}

#[test]
fn gap_matches_star_closed_form() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "star.json", r#"{"n":5,"edges":[[0,1],[0,2],[0,3],[0,4]]}"#);
    let v = stdout_json(&lytensor(&["gap", "--graph", &g, "--s", "0.3"]));
    assert!((v["gap"].as_f64().unwrap() - 0.91).abs() < 1e-9);
    assert!((v["lambda1"].as_f64().unwrap() + 4.09).abs() < 1e-9);
}

#[test]
fn gap_accepts_graph6_and_random_phases() {
    let dir = TempDir::new().unwrap();
    // Path on three vertices: phases can be gauged away on a tree.
    let g = write(&dir, "p3.g6", "Bg\n");
    let plain = stdout_json(&lytensor(&["gap", "--graph", &g, "--s", "0.4"]));
    let phased = stdout_json(&lytensor(&[
        "gap", "--graph", &g, "--s", "0.4", "--phases", "random", "--seed", "9",
    ]));
    let a = plain["gap"].as_f64().unwrap();
    let b = phased["gap"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn sixvertex_trace_equals_eulerian_sum() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tri.json", r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#);
    let v = stdout_json(&lytensor(&[
        "sixvertex",
        "--graph",
        &g,
        "--d",
        "0.3",
        "--f",
        "0.5",
        "--beta",
        "0.8",
        "--steps",
        "6",
    ]));
    let t = v["trotter_trace"].as_f64().unwrap();
    let e = v["eulerian_sum"].as_f64().unwrap();
    assert!((t - e).abs() <= 1e-10 * t.abs());
    assert_eq!(v["params"]["a"].as_f64().unwrap(), 1.0);
    assert!(v["regime"].is_string());
}

#[test]
fn sixvertex_rejects_incompatible_steps() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tri.json", r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#);
    let out = lytensor(&[
        "sixvertex",
        "--graph",
        &g,
        "--d",
        "0",
        "--f",
        "0.5",
        "--beta",
        "1",
        "--steps",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn study_writes_versioned_csv_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let res = lytensor(&[
            "study",
            "phase",
            "--n-min",
            "2",
            "--n-max",
            "5",
            "--family",
            "connected",
            "--samples",
            "4",
            "--seed",
            "11",
            "--out",
            &path_str(out),
        ]);
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# lytensor-study v1"));
    assert_eq!(
        lines.next(),
        Some("study,graph_id,n,s,metric,reference,margin,sector,pass")
    );
    assert!(text.contains("phase-shifted-tree-check"));
}

#[test]
fn ly_radius_study_writes_roots() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ly.csv");
    let res = lytensor(&[
        "study",
        "ly-radius",
        "--n-min",
        "2",
        "--n-max",
        "4",
        "--family",
        "stars",
        "--samples",
        "2",
        "--seed",
        "1",
        "--out",
        &path_str(&out),
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let roots = std::fs::read_to_string(dir.path().join("ly.roots.csv")).unwrap();
    assert!(roots
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("graph_id,n,s,y,re,im,modulus"));
    assert!(std::fs::read_to_string(out).unwrap().contains("ly-radius-star-check"));
}

#[test]
fn study_rejects_bad_arguments() {
    let dir = TempDir::new().unwrap();
    let out = path_str(&dir.path().join("x.csv"));
    let res = lytensor(&[
        "study", "gap", "--n-min", "5", "--n-max", "3", "--family", "trees", "--out", &out,
    ]);
    assert_eq!(res.status.code(), Some(2));
    let res = lytensor(&[
        "study", "nonsense", "--n-min", "2", "--n-max", "3", "--family", "trees", "--out", &out,
    ]);
    assert!(!res.status.success());
}

#[test]
fn sf_scan_reports_without_asserting() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p2.json", r#"{"n":2,"edges":[[0,1]]}"#);
    let v = stdout_json(&lytensor(&[
        "sf-scan", "--graph", &g, "--beta", "0.5", "--points", "3", "--budget", "200", "--seed", "4",
    ]));
    assert_eq!(v["scan"].as_array().unwrap().len(), 3);
    assert!(v["candidate_radius"].as_f64().unwrap() >= 1.0);
    assert_ne!(v["scan"][0]["verdict"], "Falsified");
}
