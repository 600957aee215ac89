use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qgraph-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn certify_three_edges() {
    let out = qgraph(&["certify", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["command"], "certify");
    assert_eq!(v["config"]["k1"], "3/2");
    assert_eq!(v["config"]["c"], "2");
    assert_eq!(v["n"], 3);
    assert_eq!(v["nullity"], 12);
    assert_eq!(v["span_equal"], true);
    assert_eq!(v["counts"]["total"]["computed"], 12);
    assert_eq!(v["defect_analysis"]["psi_rank"], 2);
    assert_eq!(v["pass"], true);
}

#[test]
fn family_counts_four_edges() {
    let out = qgraph(&["families", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let counts: Vec<u64> = v["families"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [10, 11, 3]);
    assert_eq!(v["total"], 24);
}

#[test]
fn invalid_parameters_exit_two() {
    for (args, message) in [
        (
            vec!["certify", "--n", "3", "--k1", "1", "--k2", "-1"],
            "momenta must differ in absolute value",
        ),
        (vec!["certify", "--n", "3", "--c", "0"], "coupling"),
        (vec!["certify", "--n", "1"], "graph size"),
        (vec!["certify", "--n", "3", "--k1", "1/0"], "1/0"),
        (vec!["certify", "--n", "3", "--format", "tsv"], "tsv"),
        (vec!["enumerate", "--n-range", "2..3"], "single"),
    ] {
        let out = qgraph(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(message), "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        ["certify", "--n", "3"],
        ["numeric-check", "--n", "3"],
        ["enumerate", "--n", "4"],
    ] {
        let a = qgraph(&args);
        let b = qgraph(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn ranges_report_in_order() {
    let out = qgraph(&["certify", "--n-range", "2..4", "--c", "-5/4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ns: Vec<u64> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["n"].as_u64().unwrap())
        .collect();
    assert_eq!(ns, [2, 3, 4]);
    assert_eq!(v["config"]["n"], serde_json::json!([2, 3, 4]));
    assert_eq!(v["reports"][0]["nullity"], 7);
    assert_eq!(v["reports"][2]["params"]["c"], "-5/4");
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch("config");
    let path = dir.join("run.toml");
    std::fs::write(&path, "n = 4\nk1 = \"7/3\"\nk2 = \"1/2\"\nc = \"-5/4\"\n").unwrap();
    let path = path.to_str().unwrap();

    let v = json(&qgraph(&["families", "--config", path]));
    assert_eq!(v["config"]["k1"], "7/3");
    assert_eq!(v["total"], 24);

    let v = json(&qgraph(&[
        "families", "--config", path, "--n", "3", "--k1", "9/4",
    ]));
    assert_eq!(v["config"]["k1"], "9/4");
    assert_eq!(v["config"]["c"], "-5/4");
    assert_eq!(v["total"], 12);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn check_reads_coefficient_tsv() {
    let dir = scratch("check");
    let tsv = String::from_utf8(qgraph(&["enumerate", "--n", "3"]).stdout).unwrap();
    let first: String = tsv
        .split_inclusive('\n')
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .collect();
    let good = dir.join("good.tsv");
    std::fs::write(&good, &first).unwrap();
    let out = qgraph(&["check", "--n", "3", "--input", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let residuals = v["waves"][0]["residuals"].as_array().unwrap();
    assert!(residuals.iter().all(|r| r["pass"] == true));
    assert!(residuals.iter().any(|r| r.get("edge").is_some()));
    assert!(residuals.iter().any(|r| r.get("column").is_some()));

    let bad = dir.join("bad.tsv");
    std::fs::write(&bad, "Lower(1)\tCC12\t1\n").unwrap();
    let out = qgraph(&["check", "--n", "3", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn basis_dump_sizes() {
    let out = qgraph(&["basis", "--n", "3", "--kind", "dbas"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with('#')).count(), 8);
    let out = qgraph(&["basis", "--n", "3", "--kind", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_and_defect_reports_pass() {
    let v = json(&qgraph(&["numeric-check", "--n", "3"]));
    assert_eq!(v["pass"], true);
    let order = v["checks"][0]["order"].as_f64().unwrap();
    assert!((1.8..=2.2).contains(&order));
    assert!(v["checks"][0].get("maxResidual").is_some());

    let v = json(&qgraph(&["defects", "--n", "4"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["defect_comparison"][0]["factor"], "-2");
    assert_eq!(v["continuous_subspace"]["dimension"], 5);
}
