use std::process::{Command, Output};

use serde_json::Value;

fn gw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gw")).args(args).output().expect("run gw")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = gw(&full);
    (code(&out), serde_json::from_slice(&out.stdout).expect("valid json"))
}

#[test]
fn compute_z4_text() {
    let out = gw(&["compute", "--ring", "z2k:2"]);
    assert_eq!(code(&out), 0);
    let s = stdout(&out);
    assert!(s.contains("GW: Z ⊕ Z/4\n"), "{s}");
    assert!(s.contains("W: Z/8\n"), "{s}");
    assert!(s.contains("<<3>> * <<3>> = 2<<3>>"), "{s}");
}

#[test]
fn compute_json_shape() {
    let (c, v) = json(&["compute", "--ring", "z2k:3"]);
    assert_eq!(c, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["gw"]["free_rank"], 1);
    assert_eq!(v["gw"]["torsion"], serde_json::json!(["4", "2"]));
    assert_eq!(v["gw"]["generators"]["3"], serde_json::json!(["1", "3", "0"]));
    assert_eq!(v["witt"]["group"], "Z/8 ⊕ Z/2");
    assert_eq!(v["mult_table"]["<<5>>"]["<<5>>"], serde_json::json!(["0", "0", "0"]));
    assert_eq!(v["sampled"], false);
}

#[test]
fn compute_truncated() {
    let (c, v) = json(&["compute", "--ring", "trunc2:5"]);
    assert_eq!(c, 0);
    assert_eq!(v["gw"]["group"], "Z ⊕ Z/2 ⊕ Z/2");
}

#[test]
fn usage_errors() {
    assert_eq!(code(&gw(&["compute", "--ring", "z2k:0"])), 2);
    assert_eq!(code(&gw(&["compute", "--ring", "q7:3"])), 2);
    assert_eq!(code(&gw(&["verify", "no-such-target"])), 2);
    assert_eq!(code(&gw(&["verify", "lemma-odd"])), 2);
    assert_eq!(code(&gw(&["tower", "--family", "z2k", "--from", "5", "--to", "5"])), 2);
    assert_eq!(code(&gw(&["oracle", "--ring", "z2k:2", "--max-rank", "5"])), 2);
}

#[test]
fn exact_refuses_sampling() {
    assert_eq!(code(&gw(&["compute", "--ring", "z2k:4", "--cap", "1000", "--exact"])), 3);
    let out = gw(&["compute", "--ring", "z2k:4", "--cap", "1000"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sampled"));
}

#[test]
fn json_is_deterministic() {
    let args = ["--format", "json", "--seed", "7", "verify", "lemma-odd", "--ring", "z2k:4", "--trials", "200"];
    assert_eq!(gw(&args).stdout, gw(&args).stdout);
    let args = ["--format", "json", "--seed", "3", "--cap", "5000", "compute", "--ring", "z2k:4"];
    assert_eq!(gw(&args).stdout, gw(&args).stdout);
}

#[test]
fn verify_targets() {
    let (c, v) = json(&["verify", "orthogonal-groups"]);
    assert_eq!(c, 0);
    assert_eq!(v["sizes"], serde_json::json!([2, 6, 48]));

    assert_eq!(code(&gw(&["verify", "lemma-odd", "--ring", "z2k:4", "--trials", "1000", "--seed", "7"])), 0);
    assert_eq!(code(&gw(&["verify", "factorization", "--ring", "z2k:3", "--trials", "100"])), 0);
    assert_eq!(code(&gw(&["verify", "relations", "--ring", "z2k:2"])), 0);

    let (c, v) = json(&["verify", "symmetrisation", "--ring", "z2k:3"]);
    assert_eq!(c, 0);
    assert_eq!(v["cokernel"], "Z/8");
    assert_eq!(v["element"], serde_json::json!(["4", "1"]));

    let out = gw(&["verify", "pfister-vanishing", "--ring", "z2k:2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("<<3, 3>> = 2<<3>>"));
    assert_eq!(code(&gw(&["verify", "pfister-vanishing", "--ring", "trunc2:6"])), 0);
}

#[test]
fn oracle_runs() {
    let (c, v) = json(&["oracle", "--ring", "z2k:2", "--max-rank", "4"]);
    assert_eq!(c, 0);
    assert_eq!(v["match"], true);
    assert_eq!(code(&gw(&["oracle", "--ring", "z2k:4", "--max-rank", "4"])), 3);
}

#[test]
fn towers() {
    let (c, v) = json(&["tower", "--family", "z2k", "--from", "2", "--to", "6"]);
    assert_eq!(c, 0);
    let iso: Vec<bool> = v["steps"].as_array().unwrap().iter().map(|s| s["isomorphism"].as_bool().unwrap()).collect();
    assert_eq!(iso, vec![false, true, true, true]);

    let (c, v) = json(&["tower", "--family", "trunc2", "--from", "2", "--to", "8"]);
    assert_eq!(c, 0);
    for s in v["steps"].as_array().unwrap() {
        let target: u32 = s["target"].as_str().unwrap()[7..].parse().unwrap();
        let expected = if target % 2 == 1 { "Z/2" } else { "0" };
        assert_eq!(s["kernel"], expected, "{s}");
    }
}

#[test]
fn square_classes_listing() {
    let (c, v) = json(&["square-classes", "--ring", "z2k:3"]);
    assert_eq!(c, 0);
    assert_eq!(v["representatives"], serde_json::json!(["1", "3", "5", "7"]));
    assert_eq!(v["minus_one"], "7");
}
