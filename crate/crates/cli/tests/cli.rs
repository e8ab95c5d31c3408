use std::process::Command;

use raag_lab_cli::{run, EXIT_CAP, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

const P4: &str = "a-b,b-c,c-d";
const SQ_JSON: &str = r#"{
  "vertices": ["a", "b", "c", "d"],
  "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]]
}"#;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["raag-lab"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_raag-lab"))
}

#[test]
fn graph_report_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.json");
    std::fs::write(&path, SQ_JSON).unwrap();
    let r = report(&["graph", "--graph", path.to_str().unwrap()]);
    assert_eq!(r["command"], "graph");
    assert_eq!(r["results"]["join_decomposition"], serde_json::json!([["a", "c"], ["b", "d"]]));
    assert_eq!(r["results"]["connected"], true);
}

#[test]
fn shorthand_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.txt");
    std::fs::write(&path, "a-b,b-c,c-d\n").unwrap();
    let r = report(&["graph", "--graph", path.to_str().unwrap()]);
    assert_eq!(r["results"]["vertices"], serde_json::json!(["a", "b", "c", "d"]));
    assert_eq!(r["results"]["join_decomposition"], Value::Null);
    assert_eq!(r["results"]["maximal_joins"].as_array().unwrap().len(), 2);
}

#[test]
fn normalize_word() {
    let r = report(&["normalize", "--graph", P4, "--word", "abA"]);
    assert_eq!(r["results"]["normal_form"], "b");
    assert_eq!(r["results"]["length"], 1);
    let r = report(&["normalize", "--graph", P4, "--word", "badB"]);
    assert_eq!(r["results"]["cyclic_core"], "ad");
    assert_eq!(r["results"]["centralizer"]["kind"], "cyclic");
}

#[test]
fn identity_lengths() {
    let r = report(&["lengths", "--graph", P4, "--word", ""]);
    assert_eq!(r["results"]["sep"], 0);
    assert_eq!(r["results"]["join"], 0);
}

#[test]
fn lengths_with_certificates() {
    let r = report(&["lengths", "--graph", "a-b,b-c,c-d,d-e,e-a", "--word", "Adac"]);
    assert_eq!(r["results"]["sep"], 2);
    assert_eq!(r["results"]["join"], 2);
    assert_eq!(r["results"]["factorization"].as_array().unwrap().len(), 2);
    assert_eq!(r["results"]["separation_certificate"].as_array().unwrap().len(), 2);
}

#[test]
fn sampled_lengths_are_seeded() {
    let args = ["lengths", "--graph", P4, "--sample", "20", "--seed", "7"];
    let a = report(&args);
    assert_eq!(a["results"]["violations"], 0);
    assert_eq!(a["results"]["samples"].as_array().unwrap().len(), 20);
    assert_eq!(a, report(&args));
    let (code, csv, _) = call(&["lengths", "--graph", P4, "--sample", "3", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn walls_report() {
    let r = report(&["walls", "--graph", P4, "--word", "ad"]);
    let walls = r["results"]["walls"].as_array().unwrap();
    assert_eq!(walls.len(), 2);
    assert_eq!(walls[1]["type"], "d");
    assert_eq!(walls[1]["rep"], "a");
    assert_eq!(r["results"]["strongly_separated"][0][1], true);
}

#[test]
fn rankone_reports() {
    let r = report(&["rankone", "--graph", P4, "--gens", "a,d"]);
    assert_eq!(r["results"]["kind"], "rank_one_element");
    let r = report(&["rankone", "--graph", "a-b,b-c,c-d,d-a", "--gens", "a,b,c,d"]);
    assert_eq!(r["results"]["kind"], "contained_in_join");
    assert_eq!(r["results"]["witness"], serde_json::json!([["a", "c"], ["b", "d"]]));
}

#[test]
fn divergence_csv_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let r = report(&[
        "divergence", "--graph", "a-b,b-c,c-d,d-a", "--word", "ac", "--delta", "1/2", "--lambda", "0",
        "--r", "2..4", "--csv", path.to_str().unwrap(), "--plot-data",
    ]);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv, "r,rho,length,states,exact\n2,1,6,40,true\n3,1,8,53,true\n4,2,12,431,true\n");
    assert_eq!(r["results"]["plot_data"], serde_json::json!([[2, 6], [3, 8], [4, 12]]));
    assert_eq!(r["results"]["growth"]["class"], "linear");
}

#[test]
fn disconnected_graph_warning() {
    let r = report(&["lengths", "--graph", "a-b,c-d,a-d,e", "--word", "ab"]);
    assert!(r["diagnostics"][0].as_str().unwrap().contains("disconnected"));
    let r = report(&["divergence", "--graph", "a-b,c", "--word", "ab", "--r", "1..3"]);
    assert!(r["diagnostics"][0].as_str().unwrap().contains("disconnected"));
    let r = report(&["normalize", "--graph", "a-b,c", "--word", "ab"]);
    assert!(r["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_two() {
    let (code, _, err) = call(&["bogus"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("Usage"));
    let (code, _, err) = call(&["normalize", "--graph", P4, "--word", "az"]);
    assert_eq!(code, EXIT_INPUT, "{err}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"vertices\": [\"a\"],\n  \"edges\": [[\"a\", \"q\"]\n").unwrap();
    let (code, _, err) = call(&["graph", "--graph", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line"), "{err}");
    let (code, _, _) = call(&["graph", "--graph", "a-b", "--format", "csv"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = call(&["divergence", "--graph", P4, "--word", "caC"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn caps_exit_three() {
    let (code, _, _) = call(&["lengths", "--graph", P4, "--word", "adadad", "--cap", "2"]);
    assert_eq!(code, EXIT_CAP);
    let out = binary()
        .args(["lengths", "--graph", P4, "--word", "adadad"])
        .env("RAAG_LAB_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CAP));
}

#[test]
fn binary_exit_codes_and_determinism() {
    let run = || {
        binary()
            .args(["lengths", "--graph", P4, "--word", "adad"])
            .env_remove("RAAG_LAB_CAP")
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = binary().arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let out = binary().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
