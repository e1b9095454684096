use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn bookpile_output_reads_back_as_a_graph() {
    let out = forge(&["bookpile", "--input", "gen:k3", "--q", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let g = forge_core::Graph::from_json(&text).unwrap();
    assert_eq!((g.n(), g.edge_count()), (12, 24));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["config"]["command"]["q"], 2);
    assert_eq!(v["standard_copies"].as_array().unwrap().len(), 8);
}

#[test]
fn graph_files_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.json");
    fs::write(&path, r#"{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4],[4,0]]}"#).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(json(&forge(&["chi", "--input", p]))["chi"], 3);
    assert_eq!(json(&forge(&["girth", "--input", p]))["girth"], 5);
    let dot = forge(&["bookpile", "--input", p, "--q", "1", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph"));
}

#[test]
fn deficit_of_half_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half.json");
    fs::write(&path, r#"{"m":2,"values":[[0.5,0.5],[0.5,0.5]]}"#).unwrap();
    let v = json(&forge(&["deficit", "--graph", "gen:k3", "--graphon", path.to_str().unwrap()]));
    assert!(v["deficit"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn search_result_feeds_deficit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("result.json");
    let o = out.to_str().unwrap();
    let s = forge(&[
        "search", "--graph", "gen:c4", "--m", "3", "--starts", "3", "--iters", "50", "--seed", "5", "--out", o,
    ]);
    assert!(s.status.success());
    let result: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let d = json(&forge(&["deficit", "--graph", "gen:c4", "--graphon", o]));
    assert_eq!(d["deficit"], result["best_deficit"]);
    assert_eq!(result["config"]["global"]["seed"], 5);
}

#[test]
fn outputs_are_repeatable() {
    let args = ["search", "--graph", "gen:k3", "--m", "3", "--starts", "4", "--iters", "40", "--seed", "2"];
    assert_eq!(forge(&args).stdout, forge(&args).stdout);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "2"]);
    let (a, b) = (json(&forge(&args)), json(&forge(&threaded)));
    assert_eq!(a["best_deficit"], b["best_deficit"]);
    assert_eq!(a["traces"], b["traces"]);
}

#[test]
fn connect_and_verify() {
    let c =
        forge(&["connect", "--q", "9", "--r", "3", "--k", "2", "--u", "(1,1,a)", "--v", "(3,a,8)", "--lift", "gen:k3"]);
    assert!(c.status.success());
    let v = json(&c);
    assert_eq!(v["valid"], true);
    assert_eq!(v["lifted"]["valid"], true);
    let r = forge(&["verify-connectivity", "--input", "gen:k3", "--q", "9", "--k", "2", "--pairs", "30"]);
    assert!(r.status.success());
    assert_eq!(json(&r)["constructive"]["pairs"], 30);
    let fail = forge(&["verify-connectivity", "--input", "gen:c5", "--k", "3"]);
    assert_eq!(fail.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(forge(&["chi", "--input", "gen:nothing"]).status.code(), Some(2));
    assert_eq!(
        forge(&["connect", "--q", "3", "--r", "3", "--k", "2", "--u", "(1,1,a)", "--v", "(1,a,1)"]).status.code(),
        Some(2)
    );
    assert_eq!(forge(&["hqr", "--q", "40", "--r", "5"]).status.code(), Some(3));
    assert_eq!(forge(&["deficit", "--graph", "gen:petersen", "--graphon", "const:7:0.5"]).status.code(), Some(3));
    assert_eq!(forge(&["girth", "--input", "gen:k3", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(forge(&["girth", "--bogus"]).status.code(), Some(2));
    let j = forge(&["jensen", "--graph", "gen:k3", "--iset", "0,1", "--q", "2", "--graphon", "const:2:0.5"]);
    assert_eq!(j.status.code(), Some(2));
}

#[test]
fn jensen_and_gradient_check() {
    let v = json(&forge(&["jensen", "--graph", "gen:k2", "--iset", "0", "--q", "2", "--graphon", "identity:2"]));
    assert_eq!((v["lhs"].as_f64(), v["rhs"].as_f64(), v["ok"].as_bool()), (Some(0.25), Some(0.25), Some(true)));
    let g = forge(&["gradient-check", "--graph", "gen:p4", "--graphon", "identity:2"]);
    assert!(g.status.success());
    assert_eq!(json(&g)["ok"], true);
}

#[test]
fn selftest_passes() {
    let out = forge(&["selftest", "--seed", "3"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);
}
