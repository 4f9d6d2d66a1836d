use std::path::PathBuf;
use std::process::{Command, Output};

use shiftarg_core::verifier::SP10_GOLDEN;

fn shiftarg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftarg")).args(args).env_remove("SHIFTARG_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn diagram_sp10_matches_golden() {
    let o = shiftarg(&["diagram", "--type", "C", "--jordan", shiftarg_core::verifier::SP10_JORDAN]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), SP10_GOLDEN);
}

#[test]
fn quantize_commute_passes() {
    let o = shiftarg(&["quantize", "--algebra", "gl3", "--mu", "nilpotent:2,1", "--check", "commute"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn gt_sp4_finds_det_difference() {
    let o = shiftarg(&["gt", "--type", "sp", "--n", "2", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dPhi4^(0)"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(shiftarg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(shiftarg(&["mf", "--algebra", "gl3"]).status.code(), Some(2));
    assert_eq!(shiftarg(&["mf", "--algebra", "e8", "--mu", "zero", "--kind", "det"]).status.code(), Some(2));
}

#[test]
fn empty_config_passes() {
    let path = config("empty.json", "");
    let o = shiftarg(&["verify-all", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_structure_exits_1() {
    let path = config(
        "corrupt.json",
        r#"{"cases": [{"name": "bad", "algebra": "gl2", "mu": "diag:1,2", "checks": ["commute"],
                       "corrupt": {"i": 1, "j": 2, "k": 0, "delta": "1"}}]}"#,
    );
    let o = shiftarg(&["verify-all", "--config", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], 1);
    assert_eq!(v["rows"][0]["theorem"], "jacobi-identity");
    assert_eq!(v["rows"][1]["status"], "skipped");
}

#[test]
fn malformed_config_exits_2() {
    let path = config("malformed.json", r#"{"cases": [{"nme": "x"}]}"#);
    assert_eq!(shiftarg(&["verify-all", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn json_output_parses() {
    let o = shiftarg(&["mf", "--algebra", "gl2", "--mu", "diag:1,2", "--kind", "det", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap();
}

#[test]
fn seed_is_deterministic() {
    let run = |seed: &str| {
        let o = shiftarg(&["quantize", "--algebra", "gl3", "--gamma", "nilpotent:2,1", "--check", "centraliser", "--seed", seed, "--json"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        stdout(&o)
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}
