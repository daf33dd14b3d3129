use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypernorm"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPERNORM_BUDGET")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const ZERO: &str = r#"{"k":2,"n":2,"values":[[0,0],[0,0],[0,0],[0,0]],"weights":[1,1]}"#;
const RANDOM: &str = r#"{"k":2,"n":2,"values":[[0.3,-1],[2,0.5],[-0.7,0.1],[1,1]],"weights":[0.5,0.5]}"#;

#[test]
fn make_then_classify() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["make", "gowers", "--k", "2", "-o", "u2.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bin(d.path(), &["classify", "u2.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["verdict"]["type"], "TypeII");
    assert_eq!(v["manifest"]["command"], "classify");
    assert_eq!(v["manifest"]["inputs"][0]["path"], "u2.json");
    assert_eq!(v["manifest"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn search_violation_exits_one() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["make", "gowers", "--k", "2"]);
    let mut pair = json(&o)["report"].clone();
    for side in ["alpha", "beta"] {
        for e in pair[side].as_array_mut().unwrap() {
            let v = e["value"].as_f64().unwrap();
            e["value"] = (2.0 * v).into();
        }
    }
    write(d.path(), "2u2.json", &pair.to_string());
    let o = bin(
        d.path(),
        &["search-violation", "--pair", "2u2.json", "--omega-size", "2", "--seed", "7", "--restarts", "400"],
    );
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["report"]["violation"]["gap"].as_f64().unwrap() > 1e-6);
}

#[test]
fn norm_of_zero_and_oracle() {
    let d = tempfile::tempdir().unwrap();
    bin(d.path(), &["make", "gowers", "--k", "2", "-o", "u2.json"]);
    write(d.path(), "zero.json", ZERO);
    write(d.path(), "f.json", RANDOM);
    let o = bin(d.path(), &["norm", "--pair", "u2.json", "--function", "zero.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["value"], 0.0);

    let o = bin(d.path(), &["norm", "--pair", "u2.json", "--function", "f.json", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout).to_string();
    assert!(text.contains("oracle"), "{text}");
}

#[test]
fn integrate_paths_agree() {
    let d = tempfile::tempdir().unwrap();
    bin(d.path(), &["make", "schatten", "--exponent", "4", "-o", "s4.json"]);
    write(d.path(), "f.json", RANDOM);
    let a = json(&bin(d.path(), &["integrate", "--pair", "s4.json", "--function", "f.json"]));
    let b = json(&bin(d.path(), &["integrate", "--pair", "s4.json", "--function", "f.json", "--brute"]));
    let re = |v: &Value| v["report"]["re"].as_f64().unwrap();
    assert!((re(&a) - re(&b)).abs() < 1e-12 * re(&a).abs());
}

#[test]
fn malformed_input_exits_two() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "bad.json", "{\"k\": 2,\n");
    let o = bin(d.path(), &["classify", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column"), "{err}");

    let o = bin(d.path(), &["classify", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(d.path(), &["verify", "no-such-inequality", "--pair", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exits_three() {
    let d = tempfile::tempdir().unwrap();
    bin(d.path(), &["make", "gowers", "--k", "2", "-o", "u2.json"]);
    write(d.path(), "zero.json", ZERO);
    let o = Command::new(env!("CARGO_BIN_EXE_hypernorm"))
        .args(["norm", "--pair", "u2.json", "--function", "zero.json"])
        .current_dir(d.path())
        .env("HYPERNORM_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn replay_reproduces_the_report() {
    let d = tempfile::tempdir().unwrap();
    bin(d.path(), &["make", "gowers", "--k", "2", "-o", "u2.json"]);
    let o = bin(
        d.path(),
        &["verify", "first-holder", "--pair", "u2.json", "--psi", "1,0", "--trials", "200", "--seed", "5"],
    );
    assert_eq!(o.status.code(), Some(0));
    let first = json(&o);
    std::fs::write(d.path().join("run.json"), &o.stdout).unwrap();
    let again = json(&bin(d.path(), &["replay", "run.json"]));
    assert_eq!(first["report"], again["report"]);
    assert_eq!(first["manifest"]["seed"], again["manifest"]["seed"]);

    // A changed input is refused.
    bin(d.path(), &["make", "schatten", "--exponent", "4", "-o", "u2.json"]);
    let o = bin(d.path(), &["replay", "run.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pretty_output() {
    let d = tempfile::tempdir().unwrap();
    bin(d.path(), &["make", "lp", "--p", "3", "-o", "l3.json"]);
    let o = bin(d.path(), &["--pretty", "classify", "l3.json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    let line = text.lines().find(|l| l.starts_with("report.verdict.s")).unwrap();
    assert_eq!(line.split_whitespace().nth(1), Some("3.0"), "{line}");
}

#[test]
fn geometry_commands() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["constants", "--kind", "C", "--t", "2", "--p", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o)["report"][0]["value"].as_f64().unwrap();
    assert!((v - 3f64.sqrt()).abs() < 1e-3);

    bin(d.path(), &["make", "lp", "--p", "2", "-o", "l2.json"]);
    let o = bin(d.path(), &["moduli", "--pair", "l2.json", "--tau-grid", "0,1", "--trials", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let vals = json(&o)["report"]["values"].clone();
    assert_eq!(vals[0], 0.0);

    bin(d.path(), &["make", "gowers", "--k", "2", "-o", "u2.json"]);
    for cmd in ["hanner", "clarkson"] {
        let o = bin(d.path(), &[cmd, "--pair", "u2.json", "--trials", "200"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
    }
    let o = bin(d.path(), &["embed-check", "--pair", "u2.json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn in_process_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = hypernorm::cli::run(["hypernorm", "make", "schatten", "--exponent", "6"], &mut out, &mut err);
    assert_eq!(code, hypernorm::cli::EXIT_OK);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["report"]["dims"], serde_json::json!([3, 3]));

    let code = hypernorm::cli::run(["hypernorm", "make", "schatten", "--exponent", "5"], &mut out, &mut err);
    assert_eq!(code, hypernorm::cli::EXIT_USAGE);
}
