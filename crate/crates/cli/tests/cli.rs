use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use toric_alpha::catalog::catalog;
use toric_alpha::input::PolytopeInput;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_toric-alpha"));
    cmd.env_remove("TORIC_ALPHA_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(&[args, &["--format", "json"]].concat());
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn alpha_with_full_group() {
    let v = json(&["alpha", "p2", "--group", "full-aut"]);
    assert_eq!(v["value"], "1");
    assert_eq!(v["glct_kG"], "1");
    assert_eq!(v["orbit"]["value"], "1");
    assert_eq!(v["path"], "vertex-formula");
    assert_eq!(v["group_order"], 6);
    let v = json(&["alpha", "dp1", "--group", "full-aut", "--k", "3"]);
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["k"], 3);
    assert_eq!(v["witness"], serde_json::json!(["-1/2", "-1/2"]));
}

#[test]
fn alpha_with_explicit_generators() {
    let v = json(&["alpha", "p2", "--group", "gens:[[-1,-1],[1,0]]"]);
    assert_eq!(v["value"], "1");
    assert_eq!(v["group_order"], 3);
    let v = json(&["orbits", "p2", "--group", "gens:[[0,1],[1,0]]"]);
    assert_eq!(v["orbit_count"], 6);
}

#[test]
fn grassmannian_alpha() {
    let v = json(&["alpha-km", "p2", "--k", "2", "--m", "2"]);
    assert_eq!(v["value"], "2/5");
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    assert!(v.get("stats").is_none());
    let v = json(&["alpha-km", "p2", "--k", "3", "--m", "2", "--stats"]);
    assert_eq!(v["value"], "3/8");
    assert_eq!(v["stats"]["candidates"], 55);
}

#[test]
fn thread_count_does_not_change_output() {
    let serial = run(&["alpha-km", "dp3", "--k", "2", "--m", "3", "--format", "json"]);
    let parallel = bin()
        .args(["alpha-km", "dp3", "--k", "2", "--m", "3", "--format", "json"])
        .env("TORIC_ALPHA_THREADS", "3")
        .output()
        .unwrap();
    assert!(serial.status.success() && parallel.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn star_p_and_stabilization() {
    assert_eq!(json(&["star-p", "p1xp1"])["holds"], false);
    assert_eq!(json(&["star-p", "p2"])["holds"], true);
    let v = json(&["stabilize", "p2", "--m", "2"]);
    assert_eq!(v["verdict"], "strict");
    let v = json(&["stabilize", "p1xp1", "--m", "2"]);
    assert_eq!(v["verdict"], "stabilizes");
    assert_eq!(v["first_k"], 1);
    assert_eq!(json(&["stabilize", "dp1", "--m", "1"])["verdict"], "stabilizes-for-all-k");
}

#[test]
fn check_ehrhart_and_k0() {
    let v = json(&["check", "dp3"]);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["integral"], true);
    assert_eq!(v["aut_order"], 12);
    let v = json(&["ehrhart", "p2", "--kmax", "6"]);
    assert_eq!(v["volume"], "9/2");
    assert_eq!(v["passed"], true);
    assert_eq!(v["counts"][0], 10);
    assert_eq!(json(&["k0", "dp1", "--group", "full-aut"])["k0"], 2);
    assert_eq!(json(&["k0", "p2", "--group", "gens:[[0,1],[1,0]]"])["k0"], 1);
}

#[test]
fn reads_standard_input_and_files() {
    let rays = r#"{"name":"plane","dim":2,"rays":[[1,0],[0,1],[-1,-1]]}"#;
    let out = with_stdin(&["alpha", "--input", "-", "--format", "json"], rays);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["name"], "plane");
    assert_eq!(v["value"], "1/3");

    let path = scratch("square.json");
    std::fs::write(&path, r#"{"vertices":[["-1","-1"],["1","-1"],["1","1"],["-1","1"]]}"#).unwrap();
    let v = json(&["star-p", path.to_str().unwrap()]);
    assert_eq!(v["holds"], false);
}

#[test]
fn catalog_entries_round_trip_through_files() {
    for e in catalog() {
        let path = scratch(&format!("{}.json", e.name));
        std::fs::write(&path, serde_json::to_string(&PolytopeInput::from_rays(e.name, &e.rays)).unwrap())
            .unwrap();
        for args in [vec!["alpha", "--group", "full-aut"], vec!["ehrhart"], vec!["star-p"]] {
            let from_name = json(&[&args[..1], &[e.name], &args[1..]].concat());
            let from_file = json(&[&args[..1], &[path.to_str().unwrap()], &args[1..]].concat());
            assert_eq!(from_name, from_file, "{} {:?}", e.name, args);
        }
    }
}

#[test]
fn malformed_input_exits_two() {
    let out = with_stdin(&["check", "--input", "-"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = with_stdin(&["check", "--input", "-"], r#"{"rays":[[2,0],[0,1],[-1,-1]]}"#);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["check", "no-such-polytope"]).status.code(), Some(2));
    assert_eq!(run(&["alpha", "p2", "--group", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["alpha", "p2", "--group", "gens:[[1,1],[0,1]]"]).status.code(), Some(2));
    assert_eq!(run(&["alpha-km", "p2", "--k", "1", "--m", "11"]).status.code(), Some(2));
    assert_eq!(
        run(&["alpha-km", "p2", "--k", "1", "--m", "2", "--group", "full-aut"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["alpha"]).status.code(), Some(2));
}

#[test]
fn report_is_byte_stable() {
    let a = run(&["report"]);
    let b = run(&["report"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: usize = catalog().iter().map(|e| e.subgroups.len()).sum();
    assert_eq!(text.lines().count(), rows + 2);
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>()[..4] == ["dp1", "full", "2", "1/2"]));
    let rows_json = json(&["report"]);
    assert_eq!(rows_json.as_array().unwrap().len(), rows);
}

#[test]
fn verify_prints_tap_and_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let plan = lines.next().unwrap();
    let n: usize = plan.strip_prefix("1..").unwrap().parse().unwrap();
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), n);
    for (i, line) in body.iter().enumerate() {
        assert!(line.starts_with(&format!("ok {} ", i + 1)), "{line}");
    }
}
