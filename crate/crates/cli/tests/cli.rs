use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let out = Command::new(env!("CARGO_BIN_EXE_algwass")).current_dir(fixtures).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn machine_output_is_json() {
    let (code, out, _) = run(&["--output", "machine", "distance", "zigzag/m_plus_n.toml", "zigzag/l.toml", "--p", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["objective"], "13");
    assert_eq!(v["exact"], serde_json::Value::Null);
    let (_, out, _) = run(&["--output", "machine", "distance", "zigzag/m_plus_n.toml", "zigzag/l.toml", "--p", "inf", "--diagram"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["objective"], "3");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["decompose", "zigzag/l.toml"]).0, 0);
    assert_eq!(run(&["decompose", "ex1/x.toml"]).0, 3);
    assert_eq!(run(&["distance", "ex1/x.toml", "ex1/y.toml"]).0, 3);
    assert_eq!(run(&["match", "zigzag/surjection.toml", "--mono"]).0, 3);
    assert_eq!(run(&["decompose", "missing.toml"]).0, 2);
    assert_eq!(run(&["distance", "zigzag/l.toml", "line/long.toml"]).0, 2);
    assert_eq!(run(&["verify", "unknown"]).0, 2);
    assert_eq!(run(&["--seed", "3", "verify", "matching", "--trials", "5"]).0, 0);
    assert_eq!(run(&["verify", "decomposition", "--trials", "0"]).0, 0);
}

#[test]
fn match_reports_the_eliminated_coefficient() {
    let (code, out, _) = run(&["--output", "machine", "match", "line/one_to_two.toml", "--mono"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pairs"][0]["target"], "[2, 5]");
    assert_eq!(v["off_diagonal"][0]["coefficient"], 0);
    assert_eq!(v["identity_holds"], true);
}

#[test]
fn field_override_changes_nothing_for_integral_data() {
    let (_, a, _) = run(&["cost", "ex1/gamma.toml"]);
    let (_, b, _) = run(&["--field-prime", "2", "cost", "ex1/gamma.toml"]);
    assert_eq!(a, b);
    assert_eq!(run(&["--field-prime", "4", "cost", "ex1/gamma.toml"]).0, 2);
}

#[test]
fn identical_inputs_are_at_distance_zero() {
    for mode in ["--module", "--diagram", "--bracket"] {
        let (code, out, _) = run(&["--output", "machine", "distance", "zigzag/m_plus_n.toml", "zigzag/m_plus_n.toml", mode]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let key = if mode == "--bracket" { "upper" } else { "objective" };
        assert_eq!(v[key], "0", "{mode}");
    }
    let (_, out, _) = run(&["--output", "machine", "distance", "ex1/x.toml", "ex1/x_raw.toml", "--bracket"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["upper"], "0");
}

#[test]
fn identity_morphism_matches_perfectly() {
    for kind in ["--mono", "--epi"] {
        let (code, out, _) = run(&["--output", "machine", "match", "line/identity.toml", kind]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["total_cost"], "0");
        assert_eq!(v["pairs"].as_array().unwrap().len(), 2);
        assert_eq!(v["unmatched"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn suites_are_deterministic_per_seed() {
    let a = run(&["--output", "machine", "--seed", "11", "verify", "axioms", "--trials", "3"]);
    let b = run(&["--output", "machine", "--seed", "11", "verify", "axioms", "--trials", "3"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}
