use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("abdyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn abdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abdyn")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn analyze_to(name: &str) -> (PathBuf, serde_json::Value) {
    let out = tmp(&format!("{name}.cert.json"));
    let o = abdyn(&["analyze", p(&scenario(&format!("{name}.json"))), "--output", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    (out, v)
}

#[test]
fn analyze_reports_verdicts() {
    let (_, v) = analyze_to("double_e");
    assert_eq!(v["verdict"], "dense");
    let (_, v) = analyze_to("diag_12_13_e2");
    assert_eq!(v["verdict"], "fibration");
    assert_eq!(v["C"], serde_json::json!([[["0", "1"]]]));
}

#[test]
fn invalid_scenarios_exit_2() {
    let o = abdyn(&["analyze", p(&scenario("invalid/non_commuting.json"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("NonCommuting(1,2)"));
    let o = abdyn(&["analyze", p(&scenario("invalid/non_dominant.json"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("NotDominant(1)"));

    let bad = tmp("bad_schema.json");
    std::fs::write(&bad, r#"{"factors": [{"name": "E", "dim": 1}], "generators": [{"tau": [[[1, 2]]]}]}"#).unwrap();
    let o = abdyn(&["analyze", p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("/generators/0/tau/0"), "{}", stderr(&o));
}

#[test]
fn verify_fibration_and_tampering() {
    let (cert, _) = analyze_to("jordan_e2");
    let sc = scenario("jordan_e2.json");
    let o = abdyn(&["verify", p(&sc), p(&cert), "--modulus", "7"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["reports"][0]["mode"], "exhaustive");
    assert_eq!(report["reports"][0]["modulus"], 7);

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["C"] = serde_json::json!([[["1", "0"], ["0", "1"]]]);
    let tampered = tmp("tampered.json");
    std::fs::write(&tampered, v.to_string()).unwrap();
    let o = abdyn(&["verify", p(&sc), p(&tampered), "--modulus", "7"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("certificate names non-proper subgroup"));

    let other = scenario("double_e.json");
    let o = abdyn(&["verify", p(&other), p(&cert)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("digest mismatch"));
}

#[test]
fn verify_dense_reports_rate() {
    let (cert, _) = analyze_to("double_e");
    let out = tmp("double_e.report.json");
    let o = abdyn(&[
        "verify",
        p(&scenario("double_e.json")),
        p(&cert),
        "--modulus",
        "11",
        "--seed",
        "1",
        "--output",
        p(&out),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["reports"][0]["full_rate"].as_f64().unwrap() >= 0.5);
    assert_eq!(v["passed"], true);
}

#[test]
fn orbit_tables() {
    let sc = tmp("translate7.json");
    std::fs::write(
        &sc,
        r#"{"factors": [{"name": "E", "dim": 1}],
            "generators": [{"tau": "1", "translation": {"torsion_terms": [{"order": "7", "vector": ["1", "2"]}]}}]}"#,
    )
    .unwrap();
    let o = abdyn(&["orbit", p(&sc), "--point", "0", "--steps", "3", "--modulus", "7"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("   "))
        .map(|l| l.trim().split_once("  ").unwrap().1.to_string())
        .collect();
    assert_eq!(rows, ["(0, 0)", "(1, 2)", "(2, 4)", "(3, 6)"]);

    let o = abdyn(&["orbit", p(&sc), "--steps", "0", "--point", "3,4", "--modulus", "7"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("   ")).count(), 1);

    let o = abdyn(&["orbit", p(&scenario("jordan3_e3.json")), "--steps", "50", "--modulus", "101", "--point", "1,2,3,4,5,6"]);
    assert!(stdout(&o).contains("closed-form match: true"));

    let o = abdyn(&["orbit", p(&sc), "--point", "1;2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad point"));
}

#[test]
fn normalize_reports() {
    let o = abdyn(&["normalize", p(&scenario("rotation_e2.json"))]);
    assert!(stdout(&o).contains("unity power n = 4"));
    let one = tmp("diag12.json");
    std::fs::write(
        &one,
        r#"{"factors": [{"name": "E", "dim": 1, "multiplicity": 2}],
            "generators": [{"tau": [[["1", "0"], ["0", "2"]]]}]}"#,
    )
    .unwrap();
    let o = abdyn(&["normalize", p(&one)]);
    assert!(stdout(&o).contains("dim B2 = 1, dim B1 = 1"), "{}", stdout(&o));
    let o = abdyn(&["normalize", p(&scenario("diag_12_21_e2.json"))]);
    assert!(stdout(&o).contains("minimalized g1 -> g1·g2"));
}
