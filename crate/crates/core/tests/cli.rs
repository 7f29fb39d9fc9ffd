use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn tro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tro"))
        .args(args)
        .output()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_clean_graph_exits_zero() {
    let out = tro(&["validate", "--in", path_str(&fixture("clean.ttl"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn validate_disjoint_clash_exits_one() {
    let out = tro(&["validate", "--in", path_str(&fixture("disjoint-clash.ttl"))]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("ERROR DISJOINT-CLASH <http://example.org/data/x>"),
        "{text}"
    );
}

#[test]
fn validate_json_format() {
    let out = tro(&[
        "validate",
        "--in",
        path_str(&fixture("disjoint-clash.ttl")),
        "--report-format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["entries"][0]["ruleId"], "DISJOINT-CLASH");
}

#[test]
fn detect_writes_one_finding_for_planted_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("findings.json");
    let out = tro(&[
        "detect",
        "--in",
        path_str(&fixture("award-to-linked-org.ttl")),
        "--out",
        path_str(&target),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 1);
    assert_eq!(doc[0]["patternId"], "AWARD-TO-LINKED-ORG");
}

#[test]
fn detect_refuses_invalid_graph() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("findings.json");
    let out = tro(&[
        "detect",
        "--in",
        path_str(&fixture("disjoint-clash.ttl")),
        "--out",
        path_str(&target),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!target.exists());
}

#[test]
fn ingest_then_detect_matches_gold() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.ttl");
    let findings = dir.path().join("findings.json");
    let out = tro(&[
        "ingest",
        "--contracts",
        path_str(&fixture("contracts.csv")),
        "--roles",
        path_str(&fixture("roles.csv")),
        "--out",
        path_str(&graph),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        tro(&["validate", "--in", path_str(&graph)]).status.code(),
        Some(0)
    );
    assert_eq!(
        tro(&[
            "detect",
            "--in",
            path_str(&graph),
            "--out",
            path_str(&findings)
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        std::fs::read_to_string(&findings).unwrap(),
        include_str!("fixtures/gold/findings.json")
    );
}

#[test]
fn export_and_vocab_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let nt = dir.path().join("clean.nt");
    assert_eq!(
        tro(&[
            "export",
            "--in",
            path_str(&fixture("clean.ttl")),
            "--format",
            "ntriples",
            "--out",
            path_str(&nt)
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(std::fs::read_to_string(&nt).unwrap().lines().count(), 12);
    let ttl = dir.path().join("tro.ttl");
    assert_eq!(
        tro(&["vocab", "--out", path_str(&ttl)]).status.code(),
        Some(0)
    );
    assert_eq!(
        std::fs::read_to_string(&ttl).unwrap(),
        include_str!("../data/tro.ttl")
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tro(&[]).status.code(), Some(2));
    assert_eq!(tro(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tro(&["validate"]).status.code(), Some(2));
    assert_eq!(
        tro(&["detect", "--in", "x.ttl", "--out", "y", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    let out = tro(&["validate", "--in", "/does/not/exist.ttl"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ttl");
    std::fs::write(&bad, "<http://a.org/s> <http://a.org/p> <http://a.org/o>\n").unwrap();
    let out = tro(&["validate", "--in", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("line"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
