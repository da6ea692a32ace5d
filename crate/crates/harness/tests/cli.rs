//! The `kmt` binary end to end: exit codes and JSON output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kmt_core::io::FunctionFile;
use kmt_core::{Domain, TruthTable};
use serde_json::Value;
use tempfile::TempDir;

fn kmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmt")).args(args).output().expect("kmt runs")
}

fn write_table(dir: &Path, name: &str, f: &TruthTable) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, FunctionFile::from_table(f).to_json()).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn constant_function_is_accepted() {
    let dir = TempDir::new().unwrap();
    let path = write_table(dir.path(), "one.json", &TruthTable::constant(Domain::line(500), true));
    let out = kmt(&["test", "--tester", "line-one-sided", "--fn", path.to_str().unwrap(), "--k", "2", "--eps", "0.1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["decision"], "ACCEPT");
    assert_eq!(v["seed"], 3);
}

#[test]
fn rejection_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let f = TruthTable::from_fn(Domain::line(400), |i| i % 2 == 0);
    let path = write_table(dir.path(), "alt.json", &f);
    let out = kmt(&["test", "--tester", "line-one-sided", "--fn", path.to_str().unwrap(), "--k", "1", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["decision"], "REJECT");
}

#[test]
fn dp_and_brute_force_agree_on_101010() {
    let dir = TempDir::new().unwrap();
    let path = write_table(dir.path(), "f.json", &TruthTable::line_from_bits(&[1, 0, 1, 0, 1, 0]));
    let p = path.to_str().unwrap();
    let mut seen = Vec::new();
    for engine in ["dp", "brute", "auto"] {
        let out = kmt(&["distance", "--fn", p, "--k", "2", "--engine", engine]);
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        assert_eq!((v["num"].as_u64(), v["den"].as_u64()), (Some(2), Some(6)), "{engine}");
        seen.push(v);
    }
    assert_eq!(seen[0], seen[1]);
    let out = kmt(&["distance", "--fn", p, "--k", "2", "--engine", "matching"]);
    assert_eq!(stdout_json(&out)["num"], 1);
}

#[test]
fn malformed_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"domain\": {\"kind\": \"line\"").unwrap();
    let out = kmt(&["distance", "--fn", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("function file"));
    assert_eq!(kmt(&["test", "--tester", "nope", "--fn", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(kmt(&["distance"]).status.code(), Some(2));
}

#[test]
fn oversized_brute_force_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let path = write_table(dir.path(), "big.json", &TruthTable::zeros(Domain::grid(5, 2)));
    let out = kmt(&["distance", "--fn", path.to_str().unwrap(), "--k", "2", "--engine", "brute"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn generated_files_feed_the_other_commands() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("gv.json");
    let lazy = dir.path().join("gv_lazy.json");
    for (path, extra) in [(&table, None), (&lazy, Some("--lazy"))] {
        let mut args = vec!["gen", "--family", "gv", "--kind", "line", "--n", "2000", "--params", r#"{"k": 4, "eps": 0.1}"#, "--seed", "9", "-o", path.to_str().unwrap()];
        args.extend(extra);
        assert_eq!(kmt(&args).status.code(), Some(0));
    }
    let a = kmt(&["distance", "--fn", table.to_str().unwrap(), "--k", "4"]);
    let b = kmt(&["distance", "--fn", lazy.to_str().unwrap(), "--k", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let flow = kmt(&["distance", "--fn", table.to_str().unwrap(), "--k", "4", "--engine", "flow"]);
    assert_eq!(flow.status.code(), Some(2));
}

#[test]
fn l1_tester_reads_real_function_files() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("real.json");
    let values: Vec<String> = (0..60).map(|i| format!("{}/60", i)).collect();
    let text = serde_json::json!({"domain": {"kind": "line", "n": 60}, "values": values}).to_string();
    std::fs::write(&path, text).unwrap();
    let out = kmt(&["test", "--tester", "l1", "--fn", path.to_str().unwrap(), "--eps1", "0.1", "--eps2", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_json(&out)["reason"].as_str().unwrap().starts_with("m=10;"));
}

#[test]
fn experiment_writes_versioned_records() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{"cells": [{"tester": "line-one-sided", "family": "alternating", "domain": "line",
            "grid": {"n": [300], "k": [1], "eps": [0.1]}, "family_params": {"pieces": 30},
            "trials": 5, "base_seed": 2}]}"#,
    )
    .unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let plots = dir.path().join("plots");
    for (out, jobs) in [(&out_a, "1"), (&out_b, "2")] {
        let run = kmt(&["experiment", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", jobs, "--plots", plots.to_str().unwrap()]);
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    }
    let a = std::fs::read_to_string(&out_a).unwrap();
    assert_eq!(a, std::fs::read_to_string(&out_b).unwrap());
    assert!(a.starts_with("# kmt-records v1\ntester,family,n,d,k,eps1,eps2,trial,seed,verdict,queries,cert_distance,millis\n"));
    assert_eq!(a.lines().filter(|l| l.contains(",REJECT,")).count(), 5);
    assert!(plots.join("acceptance_rate.dat").exists() && plots.join("mean_queries.dat").exists());

    std::fs::write(&config, r#"{"cells": []}"#).unwrap();
    let bad = kmt(&["experiment", "--config", config.to_str().unwrap(), "--out", out_a.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn lemma_check_lists_and_rejects_unknown_names() {
    let out = kmt(&["lemma-check", "--name", "list"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 14);
    assert_eq!(kmt(&["lemma-check", "--name", "c99"]).status.code(), Some(2));
    let out = kmt(&["lemma-check", "--name", "c5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("[PASS] c5"));
}
