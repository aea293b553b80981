use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn pbdonate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbdonate")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_sequential_example() {
    let input = fixture("example1.json");
    let out = pbdonate(&["solve", "--rule", "add-sum", "--variant", "sequential", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("winner: p1,p3,p5"), "{}", stdout(&out));

    let out = pbdonate(&["solve", "--rule", "add-sum", "--variant", "sequential", "--input", &input, "--json"]);
    let v = json(&out);
    assert_eq!(v["winner"], serde_json::json!(["p1", "p3", "p5"]));
    assert_eq!(v["score"], 15);
    assert_eq!(v["utilities"]["v1"], 7);
    assert_eq!(v["rounds"][0]["selected"], serde_json::json!(["p1", "p3"]));
}

#[test]
fn solve_plain_and_pareto() {
    let input = fixture("example1.json");
    let plain = json(&pbdonate(&["solve", "--rule", "add-sum", "--input", &input, "--json"]));
    assert_eq!((plain["winner"].clone(), plain["score"].clone()), (serde_json::json!(["p1", "p2"]), serde_json::json!(19)));
    let pareto = json(&pbdonate(&["solve", "--rule", "add-sum", "--variant", "pareto", "--input", &input, "--json"]));
    assert_eq!(pareto["winner"], serde_json::json!(["p1", "p4"]));
}

#[test]
fn json_keys_are_sorted() {
    let out = pbdonate(&["solve", "--rule", "max-min", "--input", &fixture("theorem1.json"), "--json"]);
    let text = stdout(&out);
    let keys: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(text, stdout(&pbdonate(&["solve", "--rule", "max-min", "--input", &fixture("theorem1.json"), "--json"])));
}

#[test]
fn check_winner_exit_codes() {
    let donated = fixture("theorem1_donated.json");
    let out = pbdonate(&["check-winner", "--rule", "add-sum", "--variant", "plain", "--bundle", "p1,p3", "--input", &donated]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "co-winner: no\n");
    let out = pbdonate(&["check-winner", "--rule", "add-sum", "--bundle", "p1,p2", "--input", &donated]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "co-winner: yes\n");
    let out = pbdonate(&["check-winner", "--rule", "max-sum", "--bundle", "p3, p1", "--input", &donated, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["bundle"], serde_json::json!(["p1", "p3"]));
}

#[test]
fn find_donation_witness() {
    let input = fixture("theorem1.json");
    let out = pbdonate(&["find-donation", "--rule", "add-min", "--variant", "plain", "--voter", "v3", "--delta", "1", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("witness: p2:1\n"), "{}", stdout(&out));

    let out = pbdonate(&["find-donation", "--rule", "add-min", "--voter", "v3", "--delta", "0", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("witness: none"));

    let out = pbdonate(&["find-donation", "--rule", "add-min", "--voter", "v3", "--delta", "1", "--input", &input, "--json"]);
    let v = json(&out);
    assert_eq!(v["improving"], true);
    assert_eq!(v["witness"], serde_json::json!({"p1": 0, "p2": 1, "p3": 0}));
}

#[test]
fn find_donation_resource_limit() {
    let input = fixture("theorem1.json");
    let out = pbdonate(&["find-donation", "--rule", "add-sum", "--voter", "v1", "--delta", "3", "--max-nodes", "2", "--input", &input]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn check_axiom_reports() {
    let donated = fixture("theorem1_donated.json");
    let out = pbdonate(&["check-axiom", "--axiom", "no-harm", "--rule", "add-sum", "--input", &donated]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("voter: v2"));
    let out = pbdonate(&["check-axiom", "--axiom", "no-harm", "--rule", "add-sum", "--variant", "pareto", "--input", &donated]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("holds on supplied perturbations"));

    let welfare = fixture("welfare_mono.json");
    let args = ["check-axiom", "--axiom", "welfare-mono", "--rule", "add-sum", "--variant", "sequential", "--voter", "v1", "--project", "p1"];
    let out = pbdonate(&[&args[..], &["--input", &welfare, "--json"]].concat());
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["perturbations"], 1);
    assert_eq!(v["violations"][0]["original_value"], 13);
    assert_eq!(v["violations"][0]["perturbed_value"], 11);

    let out = pbdonate(&["check-axiom", "--axiom", "welfare-mono", "--rule", "add-sum", "--input", &welfare]);
    assert_eq!(out.status.code(), Some(0));

    let family = fixture("theorem8_family.json");
    for variant in ["plain", "sequential", "pareto"] {
        let out = pbdonate(&["check-axiom", "--axiom", "voter-mono", "--rule", "add-min", "--variant", variant, "--input", &family]);
        assert_eq!(out.status.code(), Some(1), "{variant}");
    }
}

#[test]
fn fuzz_reports_and_is_deterministic() {
    let args = ["fuzz", "--axiom", "no-harm", "--rule", "add-sum", "--trials", "300", "--seed", "5", "--json"];
    let (a, b) = (pbdonate(&args), pbdonate(&args));
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(!v["violating_trials"].as_array().unwrap().is_empty());
    let shrunk = serde_json::to_string(&v["shrunk"]["instance"]).unwrap();
    assert!(pbdonate::parse_instance(&shrunk).is_ok());

    let out = pbdonate(&["fuzz", "--axiom", "project-mono", "--rule", "max-min", "--variant", "pareto", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 with violations"));
}

#[test]
fn error_exit_codes() {
    let out = pbdonate(&["solve", "--rule", "add-avg", "--input", &fixture("example1.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = pbdonate(&["solve", "--rule", "add-sum"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pbdonate(&["solve", "--rule", "add-sum", "--input", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pbdonate(&["find-donation", "--rule", "add-sum", "--voter", "nobody", "--delta", "1", "--input", &fixture("example1.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = pbdonate(&["fuzz", "--axiom", "no-harm", "--rule", "add-sum", "--max-cost", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "{{\n  \"budget\": 1,\n  \"surprise\": true\n}}").unwrap();
    let out = pbdonate(&["solve", "--rule", "add-sum", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let mut infeasible = tempfile::NamedTempFile::new().unwrap();
    write!(
        infeasible,
        r#"{{"budget": 1, "num_types": 1, "projects": [{{"name": "a", "cost": 5, "types": [0]}}],
            "voters": [{{"name": "x", "sat": [1], "donation": [0]}}], "lower": [1], "upper": [1]}}"#
    )
    .unwrap();
    let out = pbdonate(&["solve", "--rule", "add-sum", "--input", infeasible.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let out = pbdonate(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn in_process_run_matches_binary() {
    let input = fixture("example1.json");
    let args = ["pbdonate", "solve", "--rule", "add-sum", "--input", input.as_str()];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(pbdonate::cli::run(args, &mut out, &mut err), 0);
    assert_eq!(out, pbdonate(&args[1..]).stdout);
}
