use std::fs;
use std::process::{Command, Output};

fn exsplash(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exsplash")).args(args).output().unwrap()
}

fn data_rows(text: &str) -> usize {
    // first line is the provenance comment, second the column header
    text.lines().skip(2).filter(|l| !l.is_empty()).count()
}

#[test]
fn passing_run_exits_zero() {
    let out = exsplash(&["--q", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall: PASS"));
}

#[test]
fn q2_subline_count_fails_with_exit_one() {
    let out = exsplash(&["--q", "2", "--suite", "sublines", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["suites"][0]["checks"].as_array().unwrap();
    let count = checks.iter().find(|c| c["id"] == "sublines.count").unwrap();
    assert_eq!(count["pass"], false);
    assert_eq!(count["counts"]["reguli"], 35);
    assert_eq!(count["counts"]["reguli_expected"], 14);
}

#[test]
fn q2_without_subline_suites_passes() {
    let mut args = vec!["--q", "2"];
    for s in ["fields", "spread", "subplane", "quadrics", "tangents", "covers", "transversals", "carriers", "disjoint", "replacement"] {
        args.extend(["--suite", s]);
    }
    assert_eq!(exsplash(&args).status.code(), Some(0));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["--q", "6"][..],
        &["--q", "3", "--poly", "3^1:0,1:1,1,1"],
        &["--q", "3", "--poly", "2^1:0,1:1,1,0"],
        &["--q", "3", "--suite", "nonsense"],
        &["--q", "3", "--dump", "nonsense"],
    ] {
        let out = exsplash(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn quadric_counts_at_q3() {
    let out = exsplash(&["--q", "3", "--suite", "quadrics", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let zero = report["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "quadrics.zero-set")
        .unwrap()
        .clone();
    assert_eq!(zero["counts"]["affine_scanned"], 729);
    assert_eq!(zero["counts"]["zeros"], 13);
}

#[test]
fn dumps_have_the_expected_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = exsplash(&["--q", "2", "--dump", "transversals", "--dump", "subplane", "--dump-dir", d]);
    assert_eq!(out.status.code(), Some(0));
    let tr = fs::read_to_string(dir.path().join("transversals.csv")).unwrap();
    assert!(tr.starts_with("# exsplash q=2 tower=2^1:0,1:1,1,0 artifact=transversals"));
    assert_eq!(data_rows(&tr), 9);
    assert_eq!(data_rows(&fs::read_to_string(dir.path().join("subplane.csv")).unwrap()), 7);

    let out = exsplash(&["--q", "3", "--dump", "covers", "--dump", "classification", "--dump-dir", d]);
    assert_eq!(out.status.code(), Some(0));
    let covers = fs::read_to_string(dir.path().join("covers.csv")).unwrap();
    assert_eq!(data_rows(&covers), 26);
    let cls = fs::read_to_string(dir.path().join("classification.csv")).unwrap();
    assert_eq!(cls.lines().filter(|l| l.contains(",pencil,")).count(), 13);
    assert_eq!(cls.lines().filter(|l| l.contains(",dual-conic,")).count(), 13);
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "2")] {
        let out = exsplash(&["--q", "3", "--format", "json", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn all_towers_adds_the_invariance_suite() {
    let out = exsplash(&["--q", "3", "--all-towers", "--suite", "covers", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let inv = report["suites"].as_array().unwrap().iter().find(|s| s["name"] == "tower-invariance").unwrap();
    assert_eq!(inv["checks"].as_array().unwrap().len(), 4);
}
