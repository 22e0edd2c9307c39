use std::process::{Command, Output};

use q16det::document::CertificateDocument;

fn q16det(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_q16det")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_exit_codes() {
    let o = q16det(&["classify", "245"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p = 7, m = 5"));

    let o = q16det(&["classify", "512"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("EvenNotMultipleOf1024"));

    assert_eq!(q16det(&["classify", "13"]).status.code(), Some(1));
    assert_eq!(q16det(&["classify", "-7", "0", "17"]).status.code(), Some(0));
    assert_eq!(q16det(&["classify", "abc"]).status.code(), Some(2));
    assert_eq!(q16det(&["classify"]).status.code(), Some(2));
}

#[test]
fn classify_json() {
    let o = q16det(&["--json", "classify", "245", "3"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["achievable"], true);
    assert_eq!(lines[0]["recipe"]["p"], "7");
    assert_eq!(lines[1]["reason"], "OddCongruent3Mod4");
}

#[test]
fn witness_emits_one_document_per_line() {
    let o = q16det(&["--json", "witness", "17", "-147", "1024"]);
    assert_eq!(o.status.code(), Some(0));
    let docs: Vec<CertificateDocument> =
        stdout(&o).lines().map(|l| CertificateDocument::from_json(l).unwrap()).collect();
    let ns: Vec<&str> = docs.iter().map(|d| d.n.as_str()).collect();
    assert_eq!(ns, ["17", "-147", "1024"]);
    for d in &docs {
        d.reverify().unwrap();
    }
    assert_eq!(q16det(&["witness", "17", "15"]).status.code(), Some(1));
}

#[test]
fn verify_coeffs() {
    let o = q16det(&["verify", "--coeffs=-1,0,0,0,0,0,0,0,1,1,0,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-147"));

    let o = q16det(&["--json", "verify", "--coeffs", "1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["direct"], "1");
    assert_eq!(v["agree"], true);

    assert_eq!(q16det(&["verify", "--coeffs", "1,2,3"]).status.code(), Some(2));
}

#[test]
fn verify_rejects_tampered_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = q16det(&["--json", "witness", "245"]);
    let mut doc = CertificateDocument::from_json(stdout(&o).trim()).unwrap();
    doc.g[0] = "7".into();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, doc.to_json()).unwrap();
    let o = q16det(&["verify", "--cert", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scan_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = q16det(&["--json", "--out-dir", dir.path().to_str().unwrap(), "scan", "--support", "0,1", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["scanned"], 65536);
    assert_eq!(v["violation_count"], 0);
    assert!(dir.path().join("scan_report.json").exists());

    let o = q16det(&["scan", "--support=-1,0,1", "--limit", "1000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn crosscheck_and_audit() {
    assert_eq!(q16det(&["crosscheck", "--count", "500", "--seed", "3"]).status.code(), Some(0));
    let o = q16det(&["--json", "audit", "--count", "200", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["audited"], 200);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}
