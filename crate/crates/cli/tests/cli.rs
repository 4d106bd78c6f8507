use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainmdp")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_chainmdp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let code = data("z121_322.json");
    assert_eq!(run(&["check", "mdp", "--code", &code, "--method", "both"]).status.code(), Some(0));
    assert_eq!(run(&["check", "reverse-mdp", "--code", &code]).status.code(), Some(0));
    assert_eq!(run(&["check", "delay-free", "--code", &data("zpr_zz_stack.json")]).status.code(), Some(1));
    let bad = run(&["check", "mdp", "--code", &data("bad.json")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error: "));
    assert_eq!(run(&["check", "mdp", "--code", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn report_shape() {
    let out = run(&["check", "mdp", "--code", &data("z121_322.json"), "--method", "both"]);
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["results"]["minors"], true);
    assert_eq!(r["results"]["distances"], true);
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(r.get("timing_ms").is_none());
    let again = report(&run(&["check", "mdp", "--code", &data("z121_322.json"), "--method", "both"]));
    assert_eq!(r, again);
    let timed = report(&run(&["--timing", "check", "mdp", "--code", &data("z121_322.json")]));
    assert!(timed["timing_ms"].is_number());
}

#[test]
fn distances_and_bounds() {
    let r = report(&run(&["distances", "--code", &data("z121_322.json"), "--max-j", "1"]));
    assert_eq!(r["results"]["column_distances"], serde_json::json!([3, 5]));
    let b = report(&run(&["bounds", "--n", "3", "--k", "2", "--delta", "2", "--nu", "2", "--max-j", "2"]));
    assert_eq!(b["results"]["generalized_singleton"], 6);
    assert_eq!(b["results"]["L"], 1);
    assert_eq!(b["results"]["column_distance_bounds"], serde_json::json!([3, 5, 7]));
    let over = run(&["distances", "--code", &data("z121_322.json"), "--max-j", "9"]);
    assert_eq!(over.status.code(), Some(2));
}

#[test]
fn construct_then_check() {
    let lift = run(&["construct", "lift", "--field-code", &data("f11_311.json"), "--ring", "z121"]);
    assert_eq!(lift.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(data("z121_322.json")).unwrap()).unwrap();
    let built: Value = serde_json::from_slice(&lift.stdout).unwrap();
    assert_eq!(built["coeffs"], saved["coeffs"]);
    let check = run_stdin(&["check", "reverse-mdp", "--method", "both"], &lift.stdout);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stderr));

    let sr = run(&[
        "construct", "superregular", "--matrix", &data("t6_z11.json"), "--n", "3", "--k", "1", "--L", "1", "--ring", "z121",
    ]);
    assert_eq!(sr.status.code(), Some(0), "{}", String::from_utf8_lossy(&sr.stderr));
    assert_eq!(serde_json::from_slice::<Value>(&sr.stdout).unwrap()["coeffs"], saved["coeffs"]);
    let formula = run(&[
        "construct", "superregular", "--matrix", &data("t6_z11.json"), "--n", "3", "--k", "1", "--L", "1", "--ring", "z121",
        "--rows", "formula",
    ]);
    assert_eq!(formula.status.code(), Some(2));

    let bin = run(&["construct", "binomial", "--n", "3", "--k", "1", "--delta", "1", "--p", "7", "--ring", "z49"]);
    assert_eq!(bin.status.code(), Some(0), "{}", String::from_utf8_lossy(&bin.stderr));
    let check = run_stdin(&["check", "reverse-mdp"], &bin.stdout);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn search_requires_seed_for_random() {
    let out = run(&["search", "superregular", "--ell", "4", "--ring", "f11", "--strategy", "random", "--budget", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let a = run(&["search", "superregular", "--ell", "4", "--ring", "f11", "--strategy", "random", "--seed", "3", "--budget", "300"]);
    let b = run(&["search", "superregular", "--ell", "4", "--ring", "f11", "--strategy", "random", "--seed", "3", "--budget", "300"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let none = run(&["search", "superregular", "--ell", "3", "--ring", "f2"]);
    assert_eq!(none.status.code(), Some(1));
    assert_eq!(report(&none)["results"]["count"], 0);
}

#[test]
fn blockcode_parameters() {
    let r = report(&run(&["blockcode", "params", "--matrix", &data("t6_z11.json")]));
    assert_eq!(r["results"]["parameters"], serde_json::json!([6]));
}
