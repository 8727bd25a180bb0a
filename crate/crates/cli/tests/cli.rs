//! Exit codes and output documents of the `smc` binary.

use std::process::{Command, Output};

fn smc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn converged_run_exits_zero() {
    let out = smc(&["run", "fig2", "--epsilon", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["converged"], true);
    assert!(v["hi"].as_f64().unwrap() - v["lo"].as_f64().unwrap() <= 0.1);
    assert_eq!(v["stopping"]["protocol"], "adaptive");
    assert!(v.get("wall_time_ms").is_none());
    for key in ["paths", "transitions", "transforms", "seed", "config"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn exhausted_budget_exits_two_with_partial_result() {
    let out = smc(&[
        "run",
        "ladder",
        "--preset",
        "baseline",
        "--batch-size",
        "10",
        "--max-batches",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["converged"], false);
    assert_eq!(v["paths"], 10);
    assert!(v["lo"].as_f64().unwrap() <= v["hi"].as_f64().unwrap());
}

#[test]
fn invalid_input_exits_one() {
    assert_eq!(smc(&["run", "no-such-model"]).status.code(), Some(1));
    assert_eq!(
        smc(&["run", "fig2", "--epsilon", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        smc(&["run", "fig2", "--ci-method", "wilson-cc"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        smc(&[
            "run",
            "fig2",
            "--ci-method",
            "wilson-cc",
            "--allow-unsound",
            "--epsilon",
            "0.2"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn flags_override_the_preset() {
    let out = smc(&[
        "run",
        "fig2",
        "--preset",
        "baseline",
        "--small-support",
        "true",
        "--ci-method",
        "cp",
        "--fixed-paths",
        "500",
        "--timing",
    ]);
    let v = json(&out);
    assert_eq!(v["config"]["small_support"], true);
    assert_eq!(v["config"]["equivalence"], false);
    assert_eq!(v["config"]["ci_method"], "clopper-pearson");
    assert_eq!(v["paths"], 500);
    assert_eq!(v["stopping"]["protocol"], "fixed-paths");
    assert!(v["wall_time_ms"].as_f64().is_some());
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("smc-run-{}.json", std::process::id()));
    let out = smc(&[
        "run",
        "rare_coin",
        "--epsilon",
        "0.05",
        "--output",
        path.to_str().unwrap(),
    ]);
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, out.stdout);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn solve_and_transform_reports() {
    let v = json(&smc(&["solve", "ladder"]));
    assert!((v["value"].as_f64().unwrap() - 0.95_f64.powi(6)).abs() < 1e-9);
    let t = json(&smc(&["transform", "fig2"]));
    assert_eq!(t["ground_states"], 6);
    let kinds: Vec<&str> = t["transforms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds.first(), Some(&"terminals"));
    let plain = json(&smc(&[
        "transform",
        "fig2",
        "--equivalence",
        "false",
        "--chains",
        "false",
        "--scc-fragments",
        "false",
    ]));
    assert_eq!(plain["transforms"].as_array().unwrap().len(), 1);
}

#[test]
fn coverage_and_ablation_documents() {
    let v = json(&smc(&[
        "coverage",
        "fig2",
        "--trials",
        "20",
        "--fixed-paths",
        "300",
    ]));
    assert_eq!(v["trials"], 20);
    assert!(v["fraction"].as_f64().unwrap() >= 0.0);
    let a = json(&smc(&[
        "ablate",
        "rare_coin",
        "--axes",
        "cp,chains",
        "--seeds",
        "2",
        "--epsilon",
        "0.02",
        "--batch-size",
        "100",
    ]));
    assert_eq!(a["cells"].as_array().unwrap().len(), 2);
    assert_eq!(a["summary"].as_array().unwrap().len(), 2);
}

#[test]
fn counts_dump_is_consistent() {
    let path = std::env::temp_dir().join(format!("smc-counts-{}.csv", std::process::id()));
    let out = smc(&[
        "run",
        "fig2",
        "--fixed-paths",
        "200",
        "--counts",
        path.to_str().unwrap(),
    ]);
    assert_eq!(json(&out)["paths"], 200);
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["state", "action", "successor", "n", "k"]
    );
    let mut totals = std::collections::BTreeMap::<(String, String), (u64, u64)>::new();
    for row in reader.records() {
        let row = row.unwrap();
        let e = totals.entry((row[0].into(), row[1].into())).or_default();
        e.0 = row[3].parse().unwrap();
        e.1 += row[4].parse::<u64>().unwrap();
    }
    std::fs::remove_file(path).unwrap();
    assert!(!totals.is_empty());
    for ((s, a), (n, k)) in totals {
        assert_eq!(n, k, "{s}/{a}");
    }
}
