use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pauli-tomo"));
    cmd.env_remove("PAULI_TOMO_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

#[test]
fn cover_prints_groups() {
    let out = run(&["cover", "--n", "2"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    let groups = v["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 5);
    assert!(groups.iter().all(|g| g["elements"].as_array().unwrap().len() == 4 && g["coset_reps"][0] == 0));
    assert_eq!(groups[0]["generators"][0], "00|10");
}

#[test]
fn learn_writes_versioned_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out =
        run(&["learn", "--n", "2", "--eps", "0.1", "--trials", "10", "--seed", "3", "--rule", "proof", "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("learn_trials.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# schema: pauli-tomo/learn v1"));
    assert_eq!(lines.next(), Some("trial,seed,n_total,tv,success"));
    assert_eq!(lines.clone().count(), 10);
    assert!(lines.all(|l| l.split(',').nth(2) == Some("14760")));
    let report = json(&fs::read(dir.path().join("learn_report.json")).unwrap());
    let successes = report["records"].as_array().unwrap().iter().filter(|r| r["success"] == true).count();
    assert_eq!(report["aggregates"]["successes"], successes);
    assert_eq!(report["config"]["rule"], "proof");
    let ch = json(&fs::read(dir.path().join("learned_channel.json")).unwrap());
    assert_eq!(ch["probs"].as_array().unwrap().len(), 16);
}

#[test]
fn csv_rows_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = run(&[
            "sweep",
            "--n",
            "1",
            "--trials",
            "5",
            "--grid",
            "100:10000:3",
            "--seed",
            "8",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(out.status.code() == Some(0) || out.status.code() == Some(1));
    }
    let read = |p: &Path| fs::read(p.join("sweep.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
    let csv = String::from_utf8(read(a.path())).unwrap();
    assert!(csv.starts_with("# schema: pauli-tomo/sweep v1\nN,median_tv,q25,q75,"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n": 1, "eps": 0.2, "trials": 3, "rule": "custom:50", "seed": 4}"#).unwrap();
    let out = run(&["learn", "--config", cfg.to_str().unwrap(), "--trials", "2"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["n"], 1);
    assert_eq!(v["samples_per_group"], 50);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["learn", "--eps", "0"][..],
        &["learn", "--rule", "sometimes"],
        &["sweep", "--grid", "1000:1000:4"],
        &["hard", "--family", "gaussian", "--n", "2", "--eps", "0.1"],
        &["verify", "--suite", "nope"],
        &["frobnicate"],
        &["learn", "--config", "/nonexistent/cfg.json"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let bad_threads = bin().env("PAULI_TOMO_THREADS", "zero").args(["cover", "--n", "1"]).output().unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn thread_cap_is_honoured() {
    let out = bin()
        .env("PAULI_TOMO_THREADS", "1")
        .args(["learn", "--n", "1", "--trials", "4", "--eps", "0.2"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn acceptance_failure_exits_1() {
    // a learner with 1 sample per group cannot reach TV 0.01
    let out = run(&["learn", "--n", "2", "--eps", "0.01", "--rule", "custom:1", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stdout)["passed"], false);
}

#[test]
fn hard_writes_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "hard",
        "--family",
        "rademacher",
        "--n",
        "3",
        "--eps",
        "0.01",
        "--instances",
        "40",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("hard_tv_histogram.csv")).unwrap();
    assert!(csv.starts_with("# schema: pauli-tomo/hard-tv-histogram v1\nbin_low,bin_high,count\n"));
    let total: usize = csv.lines().skip(2).map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 40 * 39 / 2);
    let report = json(&fs::read(dir.path().join("hard_report.json")).unwrap());
    assert_eq!(report["separation"]["pair_count"], 780);
}

#[test]
fn verify_algebra_passes() {
    let out = run(&["verify", "--suite", "algebra", "--n-max", "3"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "algebra");
}
