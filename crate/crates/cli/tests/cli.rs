use std::process::Command;

use a1_cli::{run, Output};
use proptest::prelude::*;
use serde_json::Value;

fn a1(args: &[&str]) -> Output {
    run(std::iter::once("a1").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let out = a1(&argv);
    (out.code, serde_json::from_str(&out.stdout).expect("valid JSON"))
}

#[test]
fn cusp_milnor_number() {
    let out = a1(&["milnor", "--field", "Q", "--f", "x2^2 - x1^3", "--point", "0,0"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "<1> + <-1>\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn verbose_shows_the_ekl_data() {
    let out = a1(&["milnor", "--field", "F7", "--f", "x2^2 - x1^3", "--point", "0,0", "-v"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("path: EKL"), "{}", out.stdout);
    assert!(out.stdout.contains("basis: 1, x1"), "{}", out.stdout);
    assert!(out.stdout.contains("Gram: "), "{}", out.stdout);
}

#[test]
fn equality_verdicts_set_the_exit_code() {
    let t = a1(&["gw-equal", "--field", "F5", "<1> + <2>", "<3> + <4>"]);
    assert_eq!((t.code, t.stdout.as_str()), (0, "True\n"));
    let f = a1(&["gw-equal", "--field", "Q", "<2>", "<1>"]);
    assert_eq!((f.code, f.stdout.as_str()), (2, "False\n"));
    let u = a1(&["gw-equal", "--field", "Q(a):a^2-2", "<a> + <3>", "<1> + <3*a>"]);
    assert_eq!((u.code, u.stdout.as_str()), (3, "Unknown\n"));
}

#[test]
fn parse_errors_point_at_the_input() {
    let out = a1(&["gw-simplify", "--field", "Q", "<3> + <-3"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    let lines: Vec<&str> = out.stderr.lines().collect();
    assert!(lines[0].starts_with("error: class: syntax error"), "{}", out.stderr);
    assert_eq!(lines[1], "  <3> + <-3");
    assert_eq!(lines[2], "        ^");

    let out = a1(&["milnor", "--f", "x2^^2", "--point", "0,0"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains('^'), "{}", out.stderr);

    let out = a1(&["gw-simplify", "--field", "Q(", "<1>"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: --field"), "{}", out.stderr);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = a1(&["no-such-command"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("unrecognized subcommand"));
    let out = a1(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("gw-equal"));
}

#[test]
fn json_reports_carry_the_schema() {
    let (code, v) = json(&["gw-simplify", "--field", "Q", "<3> + <-3>"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "gw-simplify");
    assert_eq!(v["class"], "<1> + <-1>");
    assert_eq!(v["invariants"]["rank"], 2);
    assert_eq!(v["invariants"]["signature"], 0);

    let (code, v) = json(&["gw-equal", "--field", "F7", "<1>", "<3>"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "False");

    let (code, v) = json(&["node-type", "--field", "Q", "--f", "x1^2 + x2^2", "--point", "1,1"]);
    assert_eq!(code, 1);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["error"]["kind"], "NotANode");
}

#[test]
fn verbose_json_adds_provenance() {
    let args = ["degree-local", "--field", "Q", "--system", "x1^2; x2", "--point", "0,0"];
    let (_, plain) = json(&args);
    assert!(plain.get("gram").is_none());
    let mut v = args.to_vec();
    v.push("-v");
    let (_, verbose) = json(&v);
    assert_eq!(verbose["gram"].as_array().map(Vec::len), Some(2));
    assert_eq!(verbose["basis"], serde_json::json!(["1", "x1"]));
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 3] = [
        &["--json", "-v", "verify-cor45", "--field", "F7", "--f", "x2^2 - x1^3", "--samples", "8", "--rng-seed", "3"],
        &["--json", "degree-global", "--field", "F3", "--system", "x1^2 + x2; x2^2 - x1"],
        &["-v", "bifurcate", "--f", "x2^2 - x1^3", "--g", "3*x1 + 2*x2 + 2*x1^3 - t*x1^3", "--seed", "x1: t^(1/2); x2: -t"],
    ];
    for args in cases {
        let a = a1(args);
        let b = a1(args);
        assert_eq!(a, b);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn branch_sets_over_coefficient_extensions() {
    let out = a1(&[
        "bifurcate", "--f", "x2^2 - x1^3", "--g", "x1", "--seed", "x1: t^(1/2)*1/3*c; x2: 0", "--ext", "c^2-3",
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    // f + t g has critical points x1 = 0 and x1 = ±√(2t)
    let tacnode = ["bifurcate", "--f", "x2^2 - x1^4", "--g", "4*x1^2", "--seed", "x1: 0; x2: 0"];
    let out = a1(&tacnode);
    assert_eq!(out.code, 3, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("issue:"), "{}", out.stdout);
    let mut full = tacnode.to_vec();
    full.extend(["--seed", "x1: t^(1/2)*a; x2: 0", "--ext", "a^2-2"]);
    let out = a1(&full);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("branch degree 3 of 3"), "{}", out.stdout);
}

#[test]
fn corpus_passes() {
    let out = a1(&["corpus"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn binary_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_a1"))
        .args(["milnor", "--field", "Q", "--f", "x2^2 - x1^3", "--point", "0,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "<1> + <-1>\n");

    let out = Command::new(env!("CARGO_BIN_EXE_a1"))
        .args(["gw-equal", "--field", "F7", "<1>", "<3>"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_a1")).args(["gw-simplify", "<1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains('^'));
}

fn class_text(entries: &[(i64, i64)]) -> String {
    entries.iter().map(|(m, a)| format!("{m}<{a}>")).collect::<Vec<_>>().join(" + ")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn simplified_classes_round_trip(
        desc in prop::sample::select(vec!["Q", "R", "F5", "F7", "F9"]),
        entries in prop::collection::vec((1i64..3, prop::sample::select(vec![-6i64, -3, -2, -1, 1, 2, 3, 5, 6, 10])), 1..4),
    ) {
        let text = class_text(&entries);
        let (code, v) = json(&["gw-simplify", "--field", desc, &text]);
        // F5/F7/F9 may reduce an entry to 0
        if code == 1 {
            return Ok(());
        }
        prop_assert_eq!(code, 0);
        let simple = v["class"].as_str().unwrap().to_string();
        let eq = a1(&["gw-equal", "--field", desc, &text, &simple]);
        prop_assert_eq!(eq.code, 0, "{} vs {}: {}", text, simple, eq.stdout);
        let again = json(&["gw-simplify", "--field", desc, &simple]).1;
        prop_assert_eq!(again["class"].as_str().unwrap(), simple.as_str());
    }
}
