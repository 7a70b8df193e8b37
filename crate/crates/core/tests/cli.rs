use std::process::Command;

use ncurrents::report::{Command as Cmd, RunConfig};
use ncurrents::suites::cmd_verify;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncurrents"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn verify_examples_pass() {
    let (code, out) = run(&[
        "verify",
        "--suite",
        "perfect-equality",
        "--pair",
        "sl:2",
        "--gens",
        "2",
        "--deg",
        "4",
    ]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&[
        "verify",
        "--suite",
        "bounds-chain",
        "--pair",
        "jordan:3",
        "--gens",
        "2",
        "--deg",
        "3",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("dims 0:0/0 1:2/2 2:5/5 3:12/12"), "{out}");
    let (code, out) = run(&[
        "verify",
        "--suite",
        "cartan-sl2",
        "--pair",
        "sl2irrep:3",
        "--deg",
        "4",
        "--unital",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn json_report_schema() {
    let (code, out) = run(&[
        "verify",
        "--suite",
        "closed-forms",
        "--pair",
        "so:3",
        "--deg",
        "3",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["version"].is_string());
    assert_eq!(v["config"]["pair"], "so:3");
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "anchor", "verdict", "degrees", "budget", "ms"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        let verdict = c["verdict"].as_str().unwrap();
        assert!(["pass", "fail", "vacuous", "unsupported"].contains(&verdict));
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn compute_objects() {
    let (code, out) = run(&[
        "compute", "--object", "ik", "--k", "1", "--deg", "3", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["objects"][0]["dims"], serde_json::json!([0, 0, 1, 4]));
    let (code, out) = run(&[
        "compute", "--pair", "sl:2", "--deg", "2", "--object", "closure", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["objects"][0]["dims"], serde_json::json!([0, 6, 13]));
}

#[test]
fn cartan_examples() {
    let args = |d: &'static str| {
        [
            "cartan",
            "--pair",
            "sl2irrep:3",
            "--deg",
            "3",
            "--unital",
            "--diag",
            d,
            "--json",
        ]
    };
    for (d, holds) in [("1;1;1+x", false), ("1;1;1+[x,y]", true), ("1;2;4", true)] {
        let (code, out) = run(&args(d));
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let note = v["checks"][1]["note"].as_str().unwrap();
        assert!(
            note.contains(&format!("criterion holds: {holds}")),
            "{d}: {note}"
        );
        assert!(
            note.contains(&format!("direct member: {holds}")),
            "{d}: {note}"
        );
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--pair", "nope:3"]).0, 2);
    assert_eq!(run(&["verify", "--deg", "0"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "everything"]).0, 2);
    assert_eq!(run(&["verify", "--backend", "lie"]).0, 2);
    assert_eq!(run(&["compute", "--object", "ik"]).0, 2);
    assert_eq!(
        run(&[
            "cartan",
            "--pair",
            "sl2irrep:3",
            "--unital",
            "--diag",
            "1;x"
        ])
        .0,
        2
    );
    assert_eq!(
        run(&["verify", "--suite", "cartan-sl2", "--pair", "sl2irrep:3"]).0,
        3
    );
}

#[test]
fn reports_replay_from_seed() {
    let mut cfg = RunConfig::new(Cmd::Verify, "so:3");
    cfg.deg = 3;
    cfg.unital = true;
    cfg.seed = 17;
    cfg.suite = "cartan-classical,difference-calculus".into();
    let strip = |mut v: serde_json::Value| {
        for c in v["checks"].as_array_mut().unwrap() {
            c["ms"] = serde_json::Value::Null;
        }
        v
    };
    let a = strip(serde_json::from_str(&cmd_verify(&cfg).unwrap().to_json()).unwrap());
    let b = strip(serde_json::from_str(&cmd_verify(&cfg).unwrap().to_json()).unwrap());
    assert_eq!(a, b);
}
