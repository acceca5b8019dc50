use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn spectacles(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectacles"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = spectacles(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{args:?}: bad json {e}\n{}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), json)
}

fn entry<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == name)
        .unwrap_or_else(|| panic!("no entry {name}"))
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["demo", "nothing"],
        &["demo", "decks", "--tolerance", "0"],
        &["demo", "decks", "--tolerance", "-1e-3"],
        &["verify", "theorem", "--size", "12"],
        &["maximal-group"],
    ] {
        let out = spectacles(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(spectacles(&["--help"]).status.code(), Some(0));
    assert_eq!(spectacles(&["--version"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic() {
    let a = spectacles(&["demo", "gruebleen", "--seed", "7"]);
    let b = spectacles(&["demo", "gruebleen", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = spectacles(&["demo", "gruebleen", "--seed", "8"]);
    assert_eq!(c.status.code(), Some(0));
}

#[test]
fn theorem_counts_two_invariant_propositions() {
    let (code, r) = report(&["verify", "theorem", "--size", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "PASS");
    assert_eq!(r["report_version"], 1);
    assert_eq!(
        entry(&r, "symmetric.invariant_state_propositions")["measured"],
        2
    );
}

#[test]
fn measurement_demo_passes() {
    let (code, r) = report(&["demo", "measurement"]);
    assert_eq!(code, 0);
    assert_eq!(entry(&r, "correlation_after")["status"], "PASS");
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let (code, r) = report(&["demo", "quantum-pictures", "--tolerance", "1e-300"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "FAIL");
}

#[test]
fn json_flag_writes_file_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = spectacles(&["demo", "decks", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.ends_with("demo decks: PASS\n"));
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "demo decks");
}

#[test]
fn exported_half_deck_has_order_eight_group() {
    let dir = tempfile::tempdir().unwrap();
    let deck = dir.path().join("half4.json");
    let out = spectacles(&[
        "export",
        "deck",
        "--kind",
        "half",
        "--size",
        "4",
        "--out",
        deck.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (code, r) = report(&["maximal-group", "--schema", deck.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["details"]["order"], 8);
    assert_eq!(entry(&r, "group.contains_half_swap")["measured"], true);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "[[0, 1, 2, 99]]").unwrap();
    let out = spectacles(&[
        "maximal-group",
        "--schema",
        deck.to_str().unwrap(),
        "--candidates",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_schema_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{\"states\": 3}").unwrap();
    let missing = dir.path().join("missing.json");
    for p in [&garbage, &missing] {
        let out = spectacles(&["maximal-group", "--schema", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2));
    }
}
