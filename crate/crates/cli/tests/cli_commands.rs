use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn orlicz(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_orlicz"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn classify_single_point_prints_summary_and_evidence() {
    let o = orlicz(
        &["classify", "--p", "1.5", "--weight", r#"{"family":"polynomial","beta":0.4}"#, "--dim", "1"],
        None,
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let (first, rest) = text.split_once('\n').unwrap();
    assert!(first.contains("verdict=WeaklyAmenable"), "{first}");
    let json: Value = serde_json::from_str(rest).unwrap();
    assert_eq!(json["verdict"], "WeaklyAmenable");
    assert!(!json["evidence"].as_array().unwrap().is_empty());
}

#[test]
fn classify_grid_from_stdin() {
    let o = orlicz(&["classify", "-"], Some(r#"{"p":[1.5,3],"beta":[0.2,0.4,0.8],"dim":1}"#));
    assert_eq!(code(&o), 0);
    let verdicts: Vec<String> = csv_rows(&stdout(&o)).into_iter().map(|r| r[4].clone()).collect();
    assert_eq!(
        verdicts,
        [
            "NotBanachAlgebra",
            "WeaklyAmenable",
            "NotWeaklyAmenable",
            "NotBanachAlgebra",
            "NotBanachAlgebra",
            "NotWeaklyAmenable"
        ]
    );
}

#[test]
fn classify_empty_grid_and_bad_grid() {
    let o = orlicz(&["classify", "-"], Some(r#"{"p":[],"beta":[0.4]}"#));
    assert_eq!(code(&o), 0);
    assert!(csv_rows(&stdout(&o)).is_empty());
    assert_eq!(code(&orlicz(&["classify", "-"], Some(r#"{"p":[0.9],"beta":[0.4]}"#))), 2);
    assert_eq!(code(&orlicz(&["classify", "-"], Some(r#"{"p":1.5}"#))), 2);
    assert_eq!(code(&orlicz(&["classify", "-"], Some("not json"))), 2);
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"p":3,"weight":{"family":"polynomial","beta":0.8}}"#).unwrap();
    let o = orlicz(&["classify", cfg.to_str().unwrap(), "--beta", "0.4", "--format", "csv", "--p", "1.5"], None);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][4], "WeaklyAmenable");
}

#[test]
fn conjugate_matches_closed_forms() {
    let o = orlicz(&["conjugate", "--family", "power", "--p", "2", "--format", "json"], None);
    assert_eq!(code(&o), 0);
    let json: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = json["rows"].as_array().unwrap();
    for key in ["y", "numeric", "closed_form", "abs_diff"] {
        assert_eq!(rows[0][key].as_f64(), Some(0.0), "{key}");
    }
    for r in rows {
        assert!(r["abs_diff"].as_f64().unwrap() <= 1e-6);
    }
    let o = orlicz(&["conjugate", "--family", "entropy"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&orlicz(&["conjugate", "--family", "nonesuch"], None)), 2);
}

#[test]
fn norm_reports_sandwiched_values() {
    let cfg = r#"{"young":{"family":"power","p":2},"f":{"dim":1,"entries":[[[0],[3,0]],[[1],[0,4]]]}}"#;
    let o = orlicz(&["norm", "-", "--format", "json"], Some(cfg));
    assert_eq!(code(&o), 0);
    let json: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &json["rows"][0];
    // |f| = (3, 4): modular 12.5, Luxemburg 5 / sqrt 2, Orlicz 5 sqrt 2.
    assert!((row["modular"].as_f64().unwrap() - 12.5).abs() < 1e-12);
    assert!((row["luxemburg"].as_f64().unwrap() - 5.0 / 2f64.sqrt()).abs() < 1e-9);
    assert!((row["orlicz"].as_f64().unwrap() - 5.0 * 2f64.sqrt()).abs() < 1e-8);
    assert!(row["weighted_luxemburg"].is_null());
}

#[test]
fn derivation_scan_trend_and_errors() {
    let o = orlicz(&["derivation-scan", "-", "--seed", "7"], Some(r#"{"p":1.5,"beta":0.6}"#));
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["16", "64", "256"]);
    assert!(rows.iter().all(|r| r[3] == "plateau"));
    let o = orlicz(&["derivation-scan", "-", "--seed", "7", "--beta", "0.4"], Some(r#"{"p":1.5,"beta":0.6}"#));
    assert!(csv_rows(&stdout(&o)).iter().all(|r| r[3] == "growth"));
    assert_eq!(code(&orlicz(&["derivation-scan", "-", "--trials", "0"], Some(r#"{"p":1.5,"beta":0.6}"#))), 2);
    let tight = r#"{"p":1.5,"beta":0.6,"budgets":{"max_ball_points":100}}"#;
    assert_eq!(code(&orlicz(&["derivation-scan", "-"], Some(tight))), 3);
}

#[test]
fn certify_algebra_marks_inapplicable_inclusions() {
    let o = orlicz(
        &["certify-algebra", "-", "--trials", "20", "--radius", "16"],
        Some(r#"{"p":3,"beta":1.5}"#),
    );
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert!(rows.iter().any(|r| r[0] == "conv_inclusion" && r[4] == "not_applicable"));
    assert!(rows.iter().any(|r| r[0] == "submult" && r[4] == "plateau"));
    assert!(rows.iter().filter(|r| r[0] == "l1_module").all(|r| r[2].parse::<f64>().unwrap() <= 1.0 + 1e-9));
    assert_eq!(code(&orlicz(&["certify-algebra", "-"], Some(r#"{"p":3,"beta":0.7,"checks":["x"]}"#))), 2);
}

#[test]
fn verify_filter_and_corruption() {
    let o = orlicz(&["verify", "-"], Some(r#"{"families":["power","entropy"]}"#));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6 * 5);
    assert!(rows.iter().all(|r| r[2] == "pass" || r[2] == "not_applicable"));

    let o = orlicz(&["verify", "-", "--psi-scale", "0.3333333333333333"], Some(r#"{"families":["power"]}"#));
    assert_eq!(code(&o), 1);
    let rows = csv_rows(&stdout(&o));
    assert!(rows.iter().filter(|r| r[0] == "young_inequality").all(|r| r[2] == "fail"));

    let o = orlicz(&["verify", "-"], Some(r#"{"families":[]}"#));
    assert_eq!(code(&o), 0);
    assert!(csv_rows(&stdout(&o)).is_empty());
}

#[test]
fn out_flag_writes_file_and_metadata_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = orlicz(
            &["classify", "-", "--format", "json", "--seed", "3", "--out", path.to_str().unwrap()],
            Some(r#"{"p":1.5,"beta":0.4}"#),
        );
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    let json: Value = serde_json::from_slice(&read(&a)).unwrap();
    assert_eq!(json["metadata"]["seed"], 3);
    assert_eq!(json["metadata"]["command"], "classify");
    assert_eq!(json["metadata"]["config_hash"].as_str().unwrap().len(), 64);
}
