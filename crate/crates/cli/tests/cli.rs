use std::process::{Command, Output};

use flipgame_core::{Config, GraphSpec};
use serde_json::{json, Value};

fn flipgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flipgame"))
        .args(args)
        .env_remove("FLIPGAME_ORACLE_CAP")
        .output()
        .unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = flipgame(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn orbits_of_the_five_cycle() {
    let v = json_ok(&["orbits", "--graph", "n=5 attach=1,4"]);
    assert_eq!(v["orbit_count"], 4);
    assert_eq!(v["max_orbit_weight"], 2);
    let sizes: Vec<u64> = v["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes.iter().sum::<u64>(), 32);
}

#[test]
fn reach_on_p4() {
    let v = json_ok(&["reach", "--graph", "n=4 attach=3", "--from", "1000", "--to", "0011"]);
    assert_eq!(v["reachable"], true);
    assert!(v.get("witness").is_none());
}

#[test]
fn reach_witness_replays() {
    let v = json_ok(&["reach", "--graph", "n=4 attach=3", "--from", "1000", "--to", "0011", "--witness"]);
    let moves: Vec<usize> = serde_json::from_value(v["witness"].clone()).unwrap();
    assert_eq!(v["distance"], moves.len());
    let g = GraphSpec::new(4, &[3]).unwrap();
    let end = moves
        .iter()
        .try_fold("1000".parse::<Config>().unwrap(), |u, &s| g.apply_move(&u, s, true))
        .unwrap();
    assert_eq!(end.to_string(), "0011");
}

#[test]
fn reach_beyond_cap_returns_decision_and_notice() {
    let n = 24;
    let g = GraphSpec::cycle(n).unwrap();
    let from = Config::unit(n, 1);
    let to = g.apply_move(&from, 1, true).unwrap();
    let v = json_ok(&[
        "reach",
        "--graph",
        &g.to_string(),
        "--from",
        &from.to_string(),
        "--to",
        &to.to_string(),
        "--witness",
    ]);
    assert_eq!(v["reachable"], true);
    assert_eq!(v["witness"], Value::Null);
    assert!(v["notice"].as_str().unwrap().contains("cap"));
}

#[test]
fn cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_flipgame"))
        .args(["solve", "--graph", "n=4 attach=3", "--from", "1000", "--to", "0011"])
        .env("FLIPGAME_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "CapExceeded");
}

#[test]
fn verify_up_to_eight() {
    let v = json_ok(&["verify", "--nmax", "8", "--jobs", "4"]);
    assert_eq!(v["graphs"], 247);
    assert_eq!(v["failures"], 0);
}

#[test]
fn verify_lines() {
    let out = flipgame(&["verify", "--nmax", "4", "--lines"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1 + 3 + 7 + 1);
    for l in &lines[..11] {
        for key in ["n", "attach", "pi1_size", "predicted_orbit_count", "oracle_orbit_count", "predicted_M", "oracle_M"] {
            assert!(l.get(key).is_some(), "{key} missing in {l}");
        }
        assert_eq!(l["partition_match"], true);
    }
    assert_eq!(lines[11]["graphs"], 11);
}

#[test]
fn solve_replays_in_strict_mode() {
    let v = json_ok(&["solve", "--graph", "n=6 attach=1,5", "--from", "100000", "--to", "011000"]);
    if v["solvable"] == true {
        let g = GraphSpec::cycle(6).unwrap();
        let moves: Vec<usize> = serde_json::from_value(v["moves"].clone()).unwrap();
        let end = moves
            .iter()
            .try_fold("100000".parse::<Config>().unwrap(), |u, &s| g.apply_move(&u, s, true))
            .unwrap();
        assert_eq!(end.to_string(), "011000");
    } else {
        assert_eq!(v["moves"], Value::Null);
    }
}

#[test]
fn classify_and_pi() {
    let v = json_ok(&["classify", "--graph", "n=5 attach=1,4", "--config", "00001"]);
    assert_eq!(v["side"], "WHOLE");
    assert_eq!(v["weights"], json!([1, 3, 5]));
    assert_eq!(v["config"], "00001");

    let v = json_ok(&["pi", "--graph", "n=4 attach=3"]);
    assert_eq!(v["pi"].as_array().unwrap().len(), 4);
    assert_eq!(v["pi1_size"], v["pi1"].as_array().unwrap().len());
}

#[test]
fn forms_report() {
    let v = json_ok(&["forms", "--graph", "n=4 attach=3"]);
    assert_eq!(v["congruence"], true);
    assert_eq!(v["q_invariant"], true);
    assert_eq!(v["nonsingular"], true);
    assert_eq!(v["bijection"], true);
    assert_eq!(v["transpose_orbit_count"], v["orbit_count"]);
}

#[test]
fn pretty_output_is_multiline_json() {
    let out = flipgame(&["orbits", "--graph", "n=4 attach=3", "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 3);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["orbit_count"].is_u64());
}

#[test]
fn output_is_deterministic() {
    let args = ["orbits", "--graph", "n=9 attach=2,5,7"];
    assert_eq!(flipgame(&args).stdout, flipgame(&args).stdout);
}

#[test]
fn domain_errors_exit_one_with_json() {
    for args in [
        vec!["orbits", "--graph", "n=1 attach=1"],
        vec!["orbits", "--graph", "n=4 attach=4"],
        vec!["classify", "--graph", "n=4 attach=3", "--config", "10"],
        vec!["classify", "--graph", "n=4 attach=3", "--config", "1x00"],
    ] {
        let out = flipgame(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(err["error"]["kind"].is_string());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(flipgame(&["orbits"]).status.code(), Some(2));
    assert_eq!(flipgame(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(flipgame(&["verify", "--nmax", "many"]).status.code(), Some(2));
}
