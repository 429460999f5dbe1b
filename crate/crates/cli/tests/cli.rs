use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgisog"))
        .args(args)
        .output()
        .expect("spawn lgisog")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn bound_and_window() {
    let out = run(&["bound", "--degree", "2", "--disc", "-4"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["bound"], 13);
    let out = run(&["window", "--degree", "3"]);
    assert_eq!(json(&out)["window"], serde_json::json!([7, 11, 19]));
}

#[test]
fn classnum_and_bad_disc() {
    let out = run(&["classnum", "--disc", "-196"]);
    assert_eq!(json(&out)["h"], 4);
    let out = run(&["classnum", "--disc", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].is_string());
}

#[test]
fn genus_methods_agree() {
    let out = run(&["genus", "--ell", "13", "--kind", "A4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["cosets"]["genus"], 3);
}

#[test]
fn global_test_reports_extension() {
    let out = run(&["global-test", "--ell", "7", "--j", "2268945/128"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["has_isogeny_over_k"], false);
    assert_eq!(v["has_isogeny_over_ext"], true);
    assert_eq!(v["witness"]["type"], "quadratic_factor");
}

#[test]
fn survey_reads_j_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("js.txt");
    fs::write(&path, "2268945/128\n3\n").unwrap();
    let out = run(&[
        "survey",
        "--ell",
        "7",
        "--bound",
        "500",
        "--js",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let s = v.to_string();
    assert!(s.contains("exceptional-candidate"), "{s}");
}

#[test]
fn modpoly_roundtrip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["modpoly-gen", "--ell", "3", "--out-dir", d]);
    assert!(out.status.success());
    let out = run(&["modpoly-check", "--ell", "3", "--modpoly-dir", d]);
    assert!(out.status.success());
    assert_eq!(json(&out)["valid"], true);

    let path = dir.path().join("phi_3.txt");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let i = lines.iter().position(|l| l.starts_with("1 0 ")).unwrap();
    lines[i].push('7');
    fs::write(&path, lines.join("\n")).unwrap();
    let out = run(&["modpoly-check", "--ell", "3", "--modpoly-dir", d]);
    assert_eq!(out.status.code(), Some(1));
}
