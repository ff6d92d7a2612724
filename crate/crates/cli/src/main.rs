use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use htg_cli::config::{ExperimentKind, RunConfig};
use htg_cli::emit::{self, fmt_f64};
use htg_cli::run;
use htg_cli::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "htg",
    version,
    about = "Adversarial hypothesis-testing games: equilibria, errors, and exponents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bayesian exponent sweep: solve the equilibrium for each n.
    SweepBayes(CommonArgs),
    /// Neyman-Pearson sweep: dominant rule and attacker response per n.
    SweepNp(CommonArgs),
    /// Best-response curves of both players at a single n.
    BestResponse(CommonArgs),
    /// Neyman-Pearson pure equilibrium at the given n values.
    NpEq(CommonArgs),
    /// Diagnose the structural assumptions of a game configuration.
    Check(CommonArgs),
    /// Chernoff information of the configured hypothesis pair.
    Chernoff(CommonArgs),
    /// Fixed-level Type II exponent of the configured hypothesis pair.
    Stein(CommonArgs),
}

/// Every config-file key is also a flag of the same name; flags override
/// the file, which overrides defaults.
#[derive(Args)]
struct CommonArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// Parallel sweep workers.
    #[arg(long)]
    jobs: Option<usize>,
    /// pointwise | slope
    #[arg(long)]
    exponent_mode: Option<String>,
    /// Baseline probability of symbol 1.
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    q_lo: Option<f64>,
    #[arg(long)]
    q_hi: Option<f64>,
    #[arg(long)]
    grid_size: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Sample counts: single value, comma list, or start:stop:step.
    #[arg(long)]
    n: Option<String>,
    /// abs | quad | tabulated
    #[arg(long)]
    cost_kind: Option<String>,
    #[arg(long)]
    cost_scale: Option<f64>,
    #[arg(long)]
    cost_qstar: Option<f64>,
    /// Comma-separated cost table (tabulated kind).
    #[arg(long)]
    cost_values: Option<String>,
    /// Threshold window width for best-response scans.
    #[arg(long)]
    br_window: Option<usize>,
    #[arg(long)]
    lp_tol: Option<f64>,
    #[arg(long)]
    chernoff_tol: Option<f64>,
    /// Alternative hypothesis (binary) for chernoff/stein.
    #[arg(long)]
    q1: Option<f64>,
    /// Comma-separated general-alphabet hypotheses for chernoff/stein.
    #[arg(long)]
    p_dist: Option<String>,
    #[arg(long)]
    q_dist: Option<String>,
}

impl CommonArgs {
    fn resolve(&self, kind: ExperimentKind) -> Result<RunConfig> {
        let mut cfg = RunConfig::defaults(kind);
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        // Flags override the file through the same key/value channel.
        let mut overrides: Vec<(&str, String)> = Vec::new();
        macro_rules! push {
            ($key:literal, $field:expr) => {
                if let Some(v) = &$field {
                    overrides.push(($key, v.to_string()));
                }
            };
        }
        push!("jobs", self.jobs);
        push!("exponent_mode", self.exponent_mode);
        push!("p1", self.p1);
        push!("q_lo", self.q_lo);
        push!("q_hi", self.q_hi);
        push!("grid_size", self.grid_size);
        push!("gamma", self.gamma);
        push!("epsilon", self.epsilon);
        push!("n", self.n);
        push!("cost_kind", self.cost_kind);
        push!("cost_scale", self.cost_scale);
        push!("cost_qstar", self.cost_qstar);
        push!("cost_values", self.cost_values);
        push!("br_window", self.br_window);
        push!("lp_tol", self.lp_tol);
        push!("chernoff_tol", self.chernoff_tol);
        push!("q1", self.q1);
        push!("p_dist", self.p_dist);
        push!("q_dist", self.q_dist);
        for (key, value) in overrides {
            cfg.apply_kv(key, &value)?;
        }
        if let Some(path) = &self.out_csv {
            cfg.out_csv = Some(path.clone());
        }
        if let Some(path) = &self.out_json {
            cfg.out_json = Some(path.clone());
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::SweepBayes(args) => {
            let cfg = args.resolve(ExperimentKind::ExponentSweepBayes)?;
            let rows = run::run_exponent_sweep(&cfg)?;
            finish_sweep(&cfg, &rows)
        }
        Command::SweepNp(args) => {
            let cfg = args.resolve(ExperimentKind::ExponentSweepNp)?;
            let rows = run::run_np_experiment(&cfg)?;
            finish_sweep(&cfg, &rows)
        }
        Command::NpEq(args) => {
            let cfg = args.resolve(ExperimentKind::NpEquilibrium)?;
            let rows = run::run_np_experiment(&cfg)?;
            for row in &rows {
                println!(
                    "n={} k={} pi={} q_hat={} type_ii={} exponent={}",
                    row.n,
                    row.np_rule_k.map_or_else(|| "-".into(), |k| k.to_string()),
                    row.np_rule_pi.map_or_else(|| "-".into(), fmt_f64),
                    row.attacker_mode.map_or_else(|| "-".into(), fmt_f64),
                    row.eq_error.map_or_else(|| "-".into(), fmt_f64),
                    row.exponent.map_or_else(|| "-".into(), fmt_f64),
                );
            }
            finish_sweep(&cfg, &rows)
        }
        Command::BestResponse(args) => {
            let cfg = args.resolve(ExperimentKind::BestResponseScan)?;
            let scan = run::run_best_response_scan(&cfg)?;
            match &scan.intersection {
                Some(point) => println!(
                    "curves intersect at q={} (grid index {}), threshold={}",
                    fmt_f64(point.q1),
                    point.q_index,
                    point.threshold
                ),
                None => println!("curves do not intersect on the grid"),
            }
            emit::emit_best_response_outputs(&cfg, &scan)?;
            Ok(())
        }
        Command::Check(args) => {
            let cfg = args.resolve(ExperimentKind::Check)?;
            reject_csv(&cfg)?;
            let report = run::run_check(&cfg)?;
            println!("a1_holds = {}", report.a1_holds);
            println!("a2_holds = {}", report.a2_holds);
            println!("a3_holds = {}", report.a3_holds);
            println!("a4_holds = {}", report.a4_holds);
            println!("balance_point = {}", fmt_f64(report.a4_balance_point));
            println!("qstar = {} (grid index {})", fmt_f64(report.qstar), report.qstar_index);
            for note in &report.notes {
                println!("note: {note}");
            }
            if let Some(path) = &cfg.out_json {
                emit::atomic_write(path, &emit::manifest(&cfg, "report", &report))?;
            }
            Ok(())
        }
        Command::Chernoff(args) => {
            let cfg = args.resolve(ExperimentKind::Chernoff)?;
            reject_csv(&cfg)?;
            finish_scalar(&cfg, run::run_chernoff(&cfg)?)
        }
        Command::Stein(args) => {
            let cfg = args.resolve(ExperimentKind::Stein)?;
            reject_csv(&cfg)?;
            finish_scalar(&cfg, run::run_stein(&cfg)?)
        }
    }
}

fn finish_sweep(cfg: &RunConfig, rows: &[run::SweepRow]) -> Result<()> {
    emit::emit_sweep_outputs(cfg, rows)?;
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    if let Some(last_ok) = rows.iter().rev().find(|r| r.status == "ok") {
        println!(
            "{} rows ({} failed); at n={}: eq_error={} exponent={}",
            rows.len(),
            failed,
            last_ok.n,
            last_ok.eq_error.map_or_else(|| "-".into(), fmt_f64),
            last_ok.exponent.map_or_else(|| "-".into(), fmt_f64),
        );
    } else {
        println!("{} rows, all failed", rows.len());
    }
    if !rows.is_empty() && failed == rows.len() {
        let first = rows
            .iter()
            .find(|r| r.status != "ok")
            .map(|r| r.status.clone())
            .unwrap_or_default();
        return Err(CliError::Solver(htg_core::Error::InvalidParameter(first)));
    }
    Ok(())
}

fn finish_scalar(cfg: &RunConfig, outcome: run::ScalarOutcome) -> Result<()> {
    println!("{} = {}", outcome.name, fmt_f64(outcome.value));
    if let Some(path) = &cfg.out_json {
        emit::atomic_write(path, &emit::manifest(cfg, "result", &outcome))?;
    }
    Ok(())
}

fn reject_csv(cfg: &RunConfig) -> Result<()> {
    if cfg.out_csv.is_some() {
        return Err(CliError::config(format!(
            "{} produces no tabular output; use out_json",
            cfg.experiment.as_str()
        )));
    }
    Ok(())
}
