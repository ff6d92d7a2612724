//! End-to-end behavior of the experiment runner: config ingestion and
//! precedence, output determinism across thread counts, manifest content,
//! best-response scans, and the binary's exit codes.

use std::fs;
use std::process::Command;

use htg_cli::config::{CostKind, ExperimentKind, RunConfig};
use htg_cli::emit::{best_response_csv, manifest, sweep_csv};
use htg_cli::run::{
    run_best_response_scan, run_check, run_exponent_sweep, run_np_experiment,
};

fn sweep_config(jobs: usize) -> RunConfig {
    let mut cfg = RunConfig::defaults(ExperimentKind::ExponentSweepBayes);
    cfg.q_lo = Some(0.7);
    cfg.q_hi = Some(0.9);
    cfg.cost_qstar = Some(0.8);
    cfg.n_values = vec![10, 20, 30, 40, 50];
    cfg.jobs = jobs;
    cfg
}

/// Replaces the measured wall_ms column with a fixed token; everything
/// else in the CSV must be byte-identical across runs and thread counts.
fn mask_wall_ms(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            if line.starts_with('n') || line.is_empty() {
                line.to_string()
            } else {
                let mut fields: Vec<&str> = line.split(',').collect();
                let len = fields.len();
                fields[len - 1] = "-";
                fields.join(",")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn sweep_output_is_deterministic_across_thread_counts() {
    let serial = sweep_csv(&run_exponent_sweep(&sweep_config(1)).unwrap());
    let serial_again = sweep_csv(&run_exponent_sweep(&sweep_config(1)).unwrap());
    let parallel = sweep_csv(&run_exponent_sweep(&sweep_config(4)).unwrap());
    assert_eq!(mask_wall_ms(&serial), mask_wall_ms(&serial_again));
    assert_eq!(mask_wall_ms(&serial), mask_wall_ms(&parallel));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(
        &path,
        "# experiment grid\n\
         experiment = exponent_sweep_bayes\n\
         q_lo = 0.7\n\
         q_hi = 0.9   # interval\n\
         cost_qstar = 0.8\n\
         gamma = 2.0\n\
         n = 10:30:10\n",
    )
    .unwrap();
    let mut cfg = RunConfig::defaults(ExperimentKind::ExponentSweepBayes);
    cfg.apply_file(&path).unwrap();
    assert_eq!(cfg.gamma, 2.0);
    assert_eq!(cfg.n_values, vec![10, 20, 30]);
    // A later key=value application (the CLI channel) wins.
    cfg.apply_kv("gamma", "0.5").unwrap();
    assert_eq!(cfg.gamma, 0.5);

    // Unknown keys are rejected with a line number.
    fs::write(&path, "grid_sise = 10\n").unwrap();
    let err = cfg.apply_file(&path).unwrap_err();
    assert!(err.to_string().contains("unknown key"));
    assert!(err.to_string().contains(":1"));
}

#[test]
fn manifest_records_resolved_config_and_rows() {
    let cfg = sweep_config(2);
    let rows = run_exponent_sweep(&cfg).unwrap();
    let text = manifest(&cfg, "rows", &rows);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["experiment"], "exponent_sweep_bayes");
    assert_eq!(doc["config"]["gamma"], 1.0);
    assert_eq!(doc["config"]["grid_size"], 100);
    assert_eq!(doc["config"]["lp_tol"], 1e-9);
    assert_eq!(doc["config"]["n_values"].as_array().unwrap().len(), 5);
    assert!(!doc["version"].as_str().unwrap().is_empty());
    let rows_json = doc["rows"].as_array().unwrap();
    assert_eq!(rows_json.len(), 5);
    assert_eq!(rows_json[0]["status"], "ok");
    assert!(rows_json[0]["defender_boundary_weight"].is_number());
}

/// The two best-response curves meet once n is large enough for the cost
/// pull toward q* to dominate, and not before.
#[test]
fn best_response_intersections_depend_on_n() {
    let scan_at = |n: usize, kind: CostKind| {
        let mut cfg = RunConfig::defaults(ExperimentKind::BestResponseScan);
        cfg.q_lo = Some(0.7);
        cfg.q_hi = Some(0.9);
        cfg.cost_kind = kind;
        cfg.cost_qstar = Some(0.8);
        cfg.n_values = vec![n];
        run_best_response_scan(&cfg).unwrap()
    };

    let scan = scan_at(200, CostKind::Abs);
    assert!(scan.intersection.is_none(), "no pure profile at n = 200");
    assert_eq!(scan.defender.len(), 100);
    assert_eq!(scan.attacker.len(), 20);

    let scan = scan_at(250, CostKind::Abs);
    let point = scan.intersection.expect("mutual best responses at n = 250");
    assert_eq!(point.threshold, 166);
    let step = 0.2 / 99.0;
    assert!((point.q1 - 0.8).abs() <= step + 1e-12);

    let scan = scan_at(700, CostKind::Quad);
    assert!(scan.intersection.is_none(), "no pure profile at n = 700");

    let scan = scan_at(800, CostKind::Quad);
    let point = scan
        .intersection
        .clone()
        .expect("mutual best responses at n = 800");
    assert!((point.threshold as i64 - 529).abs() <= 1);
    assert!((point.q1 - 0.8).abs() <= step + 1e-12);

    let csv = best_response_csv(&scan);
    assert!(csv.starts_with("kind,q,k\n"));
    assert_eq!(csv.lines().count(), 1 + 100 + 20);
}

#[test]
fn np_rows_carry_rule_and_budget() {
    let mut cfg = RunConfig::defaults(ExperimentKind::ExponentSweepNp);
    cfg.q_lo = Some(0.7);
    cfg.q_hi = Some(0.8);
    cfg.cost_qstar = Some(0.8);
    cfg.n_values = vec![2, 50];
    let rows = run_np_experiment(&cfg).unwrap();
    assert_eq!(rows[0].np_rule_k, Some(3));
    assert!((rows[0].np_rule_pi.unwrap() - 0.4).abs() < 1e-12);
    for row in &rows {
        assert!((row.np_type_i.unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(row.defender_k_min, row.np_rule_k);
    }
}

#[test]
fn np_single_point_grid_pins_attacker() {
    let mut cfg = RunConfig::defaults(ExperimentKind::ExponentSweepNp);
    cfg.q_lo = Some(0.8);
    cfg.q_hi = Some(0.8);
    cfg.cost_qstar = Some(0.8);
    cfg.n_values = vec![5, 25, 125];
    let rows = run_np_experiment(&cfg).unwrap();
    for row in &rows {
        assert_eq!(row.attacker_mode, Some(0.8));
    }
}

#[test]
fn degenerate_game_recovers_classical_exponent() {
    // One-point attack set with zero cost: plain testing of p against q*.
    let mut cfg = RunConfig::defaults(ExperimentKind::ExponentSweepBayes);
    cfg.q_lo = Some(0.8);
    cfg.q_hi = Some(0.8);
    cfg.cost_kind = CostKind::Tabulated;
    cfg.cost_values = Some(vec![0.0]);
    cfg.n_values = vec![400];
    let rows = run_exponent_sweep(&cfg).unwrap();
    let expected = htg_core::asymptotics::chernoff_exponent(
        &htg_core::prob::Distribution::binary(0.5).unwrap(),
        &htg_core::prob::Distribution::binary(0.8).unwrap(),
        1e-10,
    )
    .unwrap();
    let exponent = rows[0].exponent.unwrap();
    assert!(
        (exponent - expected).abs() < 0.01,
        "classical exponent {exponent} vs chernoff {expected}"
    );
}

#[test]
fn slope_mode_tracks_pointwise_under_clean_decay() {
    let mut cfg = sweep_config(1);
    cfg.n_values = vec![50, 100, 150, 200];
    cfg.exponent_mode = htg_cli::config::ExponentMode::Slope;
    let rows = run_exponent_sweep(&cfg).unwrap();
    // First row falls back to pointwise; later rows carry the regression
    // slope, which for near-exponential decay sits near the pointwise value.
    assert!(rows[0].exponent.is_some());
    let last = rows.last().unwrap();
    let slope = last.exponent.unwrap();
    assert!((0.02..0.12).contains(&slope), "slope {slope}");
}

#[test]
fn check_reports_match_game_geometry() {
    let mut cfg = RunConfig::defaults(ExperimentKind::Check);
    cfg.q_lo = Some(0.7);
    cfg.q_hi = Some(0.9);
    cfg.cost_qstar = Some(0.8);
    let report = run_check(&cfg).unwrap();
    assert!(report.a1_holds && report.a2_holds && report.a4_holds);
    assert!((report.a4_balance_point - 0.661).abs() < 5e-3);

    cfg.q_lo = Some(0.6);
    cfg.cost_qstar = Some(0.9);
    cfg.cost_scale = 3.0;
    let report = run_check(&cfg).unwrap();
    assert!(!report.a4_holds);
    assert_eq!(report.qstar, 0.9);
}

// ---- binary-level tests (exit codes, file outputs) ----

fn htg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_htg"))
}

#[test]
fn exit_code_zero_on_success() {
    let out = htg()
        .args(["stein", "--p1", "0.5", "--q1", "0.8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("stein_exponent = 0.22314355"));
}

#[test]
fn exit_code_two_on_config_error() {
    // Missing q1 entirely.
    let out = htg().args(["stein", "--p1", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Invalid game geometry (p inside Q).
    let out = htg()
        .args([
            "sweep-bayes",
            "--p1",
            "0.75",
            "--q-lo",
            "0.7",
            "--q-hi",
            "0.9",
            "--cost-qstar",
            "0.8",
            "--n",
            "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unknown config key.
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "grid_sise = 10\n").unwrap();
    let out = htg()
        .args(["check", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_four_on_io_error_without_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-dir").join("out.csv");
    let out = htg()
        .args([
            "sweep-bayes",
            "--q-lo",
            "0.7",
            "--q-hi",
            "0.9",
            "--cost-qstar",
            "0.8",
            "--n",
            "5",
            "--out-csv",
        ])
        .arg(&missing)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(!missing.exists());
    // No stray temp files in the intended parent.
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn cli_flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        "q_lo = 0.7\nq_hi = 0.9\ncost_qstar = 0.8\nn = 10\n",
    )
    .unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");

    let run = |csv: &std::path::Path, extra: &[&str]| {
        let mut cmd = htg();
        cmd.args(["sweep-bayes", "--config"])
            .arg(&conf)
            .arg("--out-csv")
            .arg(csv)
            .args(extra);
        assert!(cmd.output().unwrap().status.success());
    };
    run(&csv_a, &[]);
    run(&csv_b, &["--n", "12"]);
    let a = fs::read_to_string(&csv_a).unwrap();
    let b = fs::read_to_string(&csv_b).unwrap();
    assert!(a.lines().nth(1).unwrap().starts_with("10,"));
    assert!(b.lines().nth(1).unwrap().starts_with("12,"));
}

#[test]
fn binary_emits_manifest_json() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("run.json");
    let out = htg()
        .args([
            "np-eq",
            "--q-lo",
            "0.7",
            "--q-hi",
            "0.8",
            "--cost-qstar",
            "0.8",
            "--n",
            "40",
            "--out-json",
        ])
        .arg(&json_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["experiment"], "np_equilibrium");
    assert_eq!(doc["config"]["epsilon"], 0.1);
    assert_eq!(doc["rows"][0]["n"], 40);
}
