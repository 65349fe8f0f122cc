//! End-to-end tests of the `ringconv` binary: exit-code contract,
//! determinism of reports, and the golden flows for analyze, verify,
//! simulate, and parse.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ringconv")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const Z16_FREE: &str = "\
ring: Z(2^4)
matrix G:
[1+2D^2, 1+D, 1+D, 1+D^2]
[D, 1+D, 15+3D, 2D^2]
";

const Z9_DECOMPOSED: &str = "\
ring: Z(3^2)
matrix G0:
[3+3D, 5+D, 5+7D, 8+D]
[5+6D, 8+3D, 1+5D, 6+D]
matrix G1:
[1+4D, 4+7D, 7+D, 4+D]
decompose: C = G0 + p*G1
";

const Z3_FIELD: &str = "\
ring: Z(3^1)
matrix G:
[1+D, D, 2]
[2+2D, 2, D]
";

#[test]
fn analyze_z16_synthesize() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z16.txt", Z16_FREE);
    let out = run(&["analyze", &file, "--synthesize", "--witness"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    let g = &report["matrices"]["G"];
    assert_eq!(g["is_catastrophic"], true);
    assert_eq!(g["delta_p_factored"], "(1+D)^2");
    assert_eq!(g["minimal_p_encoder"].as_array().unwrap().len(), 8);
    let v = &g["encoder_validation"];
    for flag in ["is_p_encoder", "delay_free", "reduced", "noncatastrophic", "minimal"] {
        assert_eq!(v[flag], true, "flag {flag}");
    }
    assert!(g["witness"]["input"].as_array().unwrap().len() == 2);
    assert_eq!(g["smoke"]["passed"], true);
}

#[test]
fn analyze_identity_not_catastrophic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "id.txt",
        "ring: Z(3^2)\nmatrix I:\n[1, 0]\n[0, 1]\n",
    );
    let out = run(&["analyze", &file]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["matrices"]["I"]["is_catastrophic"], false);
    assert_eq!(report["matrices"]["I"]["delta_p"], "1");
}

#[test]
fn analyze_z9_decomposed_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z9.txt", Z9_DECOMPOSED);
    let out = run(&["analyze", &file, "--synthesize"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = &report["codes"]["C"];
    assert_eq!(c["is_free"], false);
    assert_eq!(c["is_catastrophic"], true);
    assert_eq!(c["minimal_p_encoder"].as_array().unwrap().len(), 5);
    assert_eq!(c["encoder_validation"]["minimal"], true);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z16.txt", Z16_FREE);
    let a = run(&["analyze", &file, "--synthesize", "--witness", "--seed", "7"]);
    let b = run(&["analyze", &file, "--synthesize", "--witness", "--seed", "7"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout, "reports differ across runs");
}

#[test]
fn parse_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z16.txt", Z16_FREE);
    let out = run(&["parse", &file]);
    assert!(out.status.success());
    let canonical = String::from_utf8(out.stdout).unwrap();
    // the canonical form parses to the same canonical form
    let file2 = write(dir.path(), "canon.txt", &canonical);
    let out2 = run(&["parse", &file2]);
    assert!(out2.status.success());
    assert_eq!(canonical, String::from_utf8(out2.stdout).unwrap());
    // parse errors exit 1 with a located message
    let bad = write(dir.path(), "bad.txt", "ring: Z(2^2)\nmatrix G:\n[1+*, 0]\n");
    let out3 = run(&["parse", &bad]);
    assert_eq!(out3.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out3.stderr);
    assert!(stderr.contains("line 3"), "missing location: {stderr}");
    // composite modulus is a semantic error, also exit 1
    let composite = write(dir.path(), "composite.txt", "ring: Z(6^1)\nmatrix G:\n[1]\n");
    let out4 = run(&["parse", &composite]);
    assert_eq!(out4.status.code(), Some(1));
}

#[test]
fn verify_claims_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z3.txt", Z3_FIELD);
    let good = write(
        dir.path(),
        "good.json",
        r#"{"claims": [
            {"kind": "witness", "matrix": "G",
             "input": ["D/(2+D)", "1/(2+D)"],
             "output": ["1+D", "1+D", "0"], "horizon": 64},
            {"kind": "noncatastrophic", "matrix": "G", "expect": false}
        ]}"#,
    );
    let out = run(&["verify", &file, &good]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("PASS").count(), 2);
    // a corrupted witness output must fail with exit code 2
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"claims": [
            {"kind": "witness", "matrix": "G",
             "input": ["D/(2+D)", "1/(2+D)"],
             "output": ["1+D", "1+D", "1"], "horizon": 64}
        ]}"#,
    );
    let out2 = run(&["verify", &file, &bad]);
    assert_eq!(out2.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out2.stdout).contains("FAIL"));
}

#[test]
fn verify_span_equal_claim() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "lmx.txt",
        "ring: Z(2^4)\nmatrix G:\n[1+D, 9+D, 1+5D]\n[D, 5D^2, 2+D^2]\nmatrix H:\n[1, 1, 1]\n[0, 1, 1]\n",
    );
    let claims = write(
        dir.path(),
        "claims.json",
        r#"{"claims": [{"kind": "span_equal", "left": "G", "right": "H", "level": 3}]}"#,
    );
    let out = run(&["verify", &file, &claims]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn simulate_paper_example() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z3.txt", Z3_FIELD);
    let out = run(&[
        "simulate",
        &file,
        "--input",
        "D/(2+D); 1/(2+D)",
        "--horizon",
        "64",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("output total 4 -> 4 (stabilized)"), "{text}");
    assert!(text.contains("input total 63 -> 127 (growing)"), "{text}");
    // zero input gives zero output
    let out2 = run(&["simulate", &file, "--input", "0; 0"]);
    assert!(out2.status.success());
    let text2 = String::from_utf8_lossy(&out2.stdout);
    assert!(text2.contains("output total 0 -> 0 (stabilized)"));
    // dimension mismatch is a usage error
    let out3 = run(&["simulate", &file, "--input", "1"]);
    assert_eq!(out3.status.code(), Some(1));
}

#[test]
fn simulate_coefficient_lists_and_p_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z3.txt", Z3_FIELD);
    let out = run(&[
        "simulate",
        &file,
        "--input",
        "[1,0,2]; [0,1]",
        "--p-input",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // rational inputs are rejected under --p-input
    let out2 = run(&["simulate", &file, "--input", "1/(2+D); 0", "--p-input"]);
    assert_eq!(out2.status.code(), Some(1));
}

#[test]
fn analyze_text_mode_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "z16.txt", Z16_FREE);
    let out_path = dir.path().join("report.txt");
    let out = run(&[
        "analyze",
        &file,
        "--text",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let content = std::fs::read_to_string(&out_path).unwrap();
    assert!(content.contains("matrix G"), "{content}");
    assert!(content.contains("catastrophic=true"), "{content}");
}
