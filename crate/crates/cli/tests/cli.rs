use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_gevregret");

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("GEVREGRET_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_exits_zero_and_bad_flags_exit_one() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["simulate", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn simulate_writes_trace_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "simulate",
        "--model",
        "mnl",
        "--n",
        "10",
        "--env",
        "adversarial",
        "--T",
        "10000",
        "--eta",
        "optimal",
        "--seed",
        "1",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&dir.path().join("report.json"));
    for key in ["model", "eta", "bound_thm1", "bound_thm2", "realized_regret", "ratio"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert!(r["ratio"].as_f64().unwrap() < 1.0);
    let csv = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10_001);
    assert!(csv.starts_with("t,x_1,"));
}

#[test]
fn invalid_inputs_exit_one_with_a_diagnostic() {
    let o = run(&["simulate", "--model", "nl", "--n", "6", "--lambda", "1.5", "--T", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("lambda out of (0,1]"), "{}", stderr(&o));

    let o = run(&["simulate", "--model", "mnl", "--n", "3", "--T", "0"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run_env(&["simulate", "--model", "mnl", "--n", "3", "--T", "5"], &[("GEVREGRET_SEED", "abc")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("GEVREGRET_SEED"));
}

#[test]
fn unknown_config_fields_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"learner": {"model": {"kind": "mnl", "n_alternatives": 2, "nests": [{"lambda": 1.0, "alloc": [1.0, 1.0]}]}, "eta": "optimal", "step_size": 3},
            "env": {"kind": "iid_stochastic"}, "T": 10}"#,
    )
    .unwrap();
    let o = run(&["simulate", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("step_size"), "{}", stderr(&o));
}

#[test]
fn config_document_runs_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"learner": {"model": {"kind": "mnl", "n_alternatives": 2, "nests": [{"lambda": 1.0, "alloc": [1.0, 1.0]}]}, "eta": 0.5},
            "env": {"kind": "iid_stochastic"}, "T": 50, "seed": 3}"#,
    )
    .unwrap();
    let out = dir.path().join("o");
    let o = run(&["simulate", "--config", s(&cfg), "--T", "20", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&out.join("report.json"));
    assert_eq!(r["horizon"], 20);
    assert_eq!(r["eta"], 0.5);
    assert_eq!(r["seed"], 3);
}

#[test]
fn seed_variable_overrides_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_env(
        &["simulate", "--model", "mnl", "--n", "3", "--env", "iid", "--T", "50", "--seed", "9", "--out", s(dir.path())],
        &[("GEVREGRET_SEED", "4")],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&dir.path().join("report.json"))["seed"], 4);
}

#[test]
fn several_seeds_write_separate_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["simulate", "--model", "pcl", "--n", "4", "--env", "iid", "--T", "100", "--seeds", "1,2", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["trace_seed1.csv", "trace_seed2.csv", "report_seed1.json", "report_seed2.json", "summary.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_ne!(fs::read(dir.path().join("trace_seed1.csv")).unwrap(), fs::read(dir.path().join("trace_seed2.csv")).unwrap());
}

#[test]
fn a_false_drift_claim_fails_the_bound_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "simulate",
        "--model",
        "mnl",
        "--n",
        "3",
        "--env",
        "adversarial",
        "--T",
        "1000",
        "--recency-S",
        "2",
        "--drift-bound",
        "0.000001",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(json(&dir.path().join("report.json"))["bound_holds"], false);
}

#[test]
fn rps_gap_is_within_average_regret() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["game", "--builtin", "rps", "--T", "10000", "--seed", "3", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&dir.path().join("cce_report.json"));
    let (d, m) = (r["delta_emp"].as_f64().unwrap(), r["max_regret_over_t"].as_f64().unwrap());
    assert!(d <= m.max(0.0) + 1e-9);
    assert!(dir.path().join("trace_player1.csv").exists() && dir.path().join("trace_player2.csv").exists());
}

#[test]
fn random_game_gap_decays_with_the_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["game", "--builtin", "random", "--T", "10000", "--horizons", "100", "--seed", "1", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let decay = json(&dir.path().join("cce_report.json"))["decay"].as_array().unwrap().clone();
    assert_eq!(decay[0]["T"], 100);
    assert!(decay[1]["delta_emp"].as_f64().unwrap() < decay[0]["delta_emp"].as_f64().unwrap());
}

#[test]
fn malformed_payoff_tensor_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    fs::write(&g, r#"{"players": 2, "strategies": 2, "payoffs": [[[1, 0], [0, 1]], [[0, 1], [1]]]}"#).unwrap();
    let o = run(&["game", "--game-file", s(&g), "--T", "10", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("dimension mismatch"), "{}", stderr(&o));
}

#[test]
fn verify_gradients_passes_for_all_models() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = run(&["verify", "--suite", "gradients", "--models", "all", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = json(&out);
    assert_eq!(r["passed"], true);
    let checks = r["suites"][0]["checks"].as_array().unwrap();
    let fd: Vec<f64> =
        checks.iter().filter(|c| c["name"].as_str().unwrap().contains("fd gradient")).map(|c| c["measured"].as_f64().unwrap()).collect();
    assert_eq!(fd.len(), 7);
    assert!(fd.iter().all(|v| *v < 1e-6));
}

#[test]
fn verify_hessian_prints_informational_slacks() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "hessian", "--points", "10", "--out", s(&dir.path().join("h.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("INFO") && text.contains("2 Tr"));
}

#[test]
fn bounds_csv_lists_every_family() {
    let o = run(&["bounds", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("model,lambda_min,lipschitz,eta,bound"));
    let models: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(models, ["gnl", "pcl", "cnl", "ogev", "pdgev", "nl", "logit"]);
}
