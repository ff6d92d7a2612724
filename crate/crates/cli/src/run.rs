//! Experiment runners. Sweep points are independent pure solves, so they
//! can run on a rayon pool sized by `jobs`; rows are collected back in
//! ascending n regardless of scheduling.

use std::time::Instant;

use htg_core::asymptotics::{check_assumptions, chernoff_exponent, stein_exponent};
use htg_core::detect::{type_i_error, ThresholdRule};
use htg_core::equilibria::{
    attacker_best_response, defender_best_response, np_pure_equilibrium, solve_bayes_equilibrium,
};
use htg_core::games::GameSpec;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExponentMode, RunConfig};
use crate::error::{CliError, Result};

/// One sweep point. Failed solves keep their row, with the numeric fields
/// empty and the failure recorded in `status`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub eq_error: Option<f64>,
    /// Pointwise `-ln(e)/n` or the cumulative regression slope, per the
    /// configured mode; infinite when the error underflows to zero.
    pub exponent: Option<f64>,
    pub attacker_support_min: Option<f64>,
    pub attacker_support_max: Option<f64>,
    /// Grid point carrying the largest attacker weight.
    pub attacker_mode: Option<f64>,
    pub defender_k_min: Option<usize>,
    pub defender_k_max: Option<usize>,
    /// Defender weight on the two degenerate thresholds (always/never
    /// reject); manifest-only diagnostic.
    pub defender_boundary_weight: Option<f64>,
    /// Dominant-rule threshold and randomization (Neyman-Pearson runs).
    pub np_rule_k: Option<usize>,
    pub np_rule_pi: Option<f64>,
    pub np_type_i: Option<f64>,
    pub status: String,
    pub wall_ms: u64,
}

impl SweepRow {
    fn failed(n: usize, err: &CliError, wall_ms: u64) -> Self {
        SweepRow {
            n,
            eq_error: None,
            exponent: None,
            attacker_support_min: None,
            attacker_support_max: None,
            attacker_mode: None,
            defender_k_min: None,
            defender_k_max: None,
            defender_boundary_weight: None,
            np_rule_k: None,
            np_rule_pi: None,
            np_type_i: None,
            status: err.to_string(),
            wall_ms,
        }
    }
}

fn pointwise_exponent(eq_error: f64, n: usize) -> Option<f64> {
    if eq_error == 0.0 {
        Some(f64::INFINITY)
    } else {
        htg_core::asymptotics::empirical_exponent(eq_error, n).ok()
    }
}

/// Bayesian exponent sweep: one equilibrium solve per n.
pub fn run_exponent_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let ns = cfg.n_list()?.to_vec();
    cfg.bayes_spec(ns[0])?; // validate the game parameters up front

    let solve_one = |&n: &usize| -> SweepRow {
        let start = Instant::now();
        let outcome = (|| -> Result<SweepRow> {
            let spec = cfg.bayes_spec(n)?;
            let eq = solve_bayes_equilibrium(&spec)?;
            let grid = spec.grid();
            let support = eq.attacker.support();
            let (first, last) = (support[0], support[support.len() - 1]);
            let def_support = eq.defender.support();
            let boundary = eq.defender.weights()[0] + eq.defender.weights()[spec.n() + 1];
            Ok(SweepRow {
                n,
                eq_error: Some(eq.eq_error),
                exponent: pointwise_exponent(eq.eq_error, n),
                attacker_support_min: Some(grid.q1(first)),
                attacker_support_max: Some(grid.q1(last)),
                attacker_mode: Some(grid.q1(eq.attacker.mode())),
                defender_k_min: def_support.first().copied(),
                defender_k_max: def_support.last().copied(),
                defender_boundary_weight: Some(boundary),
                np_rule_k: None,
                np_rule_pi: None,
                np_type_i: None,
                status: "ok".into(),
                wall_ms: 0,
            })
        })();
        let wall_ms = start.elapsed().as_millis() as u64;
        match outcome {
            Ok(mut row) => {
                row.wall_ms = wall_ms;
                row
            }
            Err(e) => SweepRow::failed(n, &e, wall_ms),
        }
    };

    let mut rows = on_pool(cfg.jobs, || ns.par_iter().map(solve_one).collect::<Vec<SweepRow>>())?;
    apply_exponent_mode(cfg, &mut rows);
    Ok(rows)
}

/// Neyman-Pearson sweep: dominant rule plus attacker best response per n.
pub fn run_np_experiment(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let ns = cfg.n_list()?.to_vec();
    cfg.np_spec(ns[0])?;

    let solve_one = |&n: &usize| -> SweepRow {
        let start = Instant::now();
        let outcome = (|| -> Result<SweepRow> {
            let spec = cfg.np_spec(n)?;
            let eq = np_pure_equilibrium(&spec)?;
            let q_hat = spec.grid().q1(eq.q_index);
            let fa = type_i_error(&eq.rule, spec.p())?;
            Ok(SweepRow {
                n,
                eq_error: Some(eq.eq_error),
                exponent: pointwise_exponent(eq.eq_error, n),
                attacker_support_min: Some(q_hat),
                attacker_support_max: Some(q_hat),
                attacker_mode: Some(q_hat),
                defender_k_min: Some(eq.rule.k()),
                defender_k_max: Some(eq.rule.k()),
                defender_boundary_weight: None,
                np_rule_k: Some(eq.rule.k()),
                np_rule_pi: Some(eq.rule.pi()),
                np_type_i: Some(fa),
                status: "ok".into(),
                wall_ms: 0,
            })
        })();
        let wall_ms = start.elapsed().as_millis() as u64;
        match outcome {
            Ok(mut row) => {
                row.wall_ms = wall_ms;
                row
            }
            Err(e) => SweepRow::failed(n, &e, wall_ms),
        }
    };

    let mut rows = on_pool(cfg.jobs, || ns.par_iter().map(solve_one).collect::<Vec<SweepRow>>())?;
    apply_exponent_mode(cfg, &mut rows);
    Ok(rows)
}

fn on_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::config(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(work))
}

/// In slope mode, each row's exponent becomes the least-squares slope of
/// `-ln(e)` against n over all rows up to and including it (the first row
/// keeps its pointwise value).
fn apply_exponent_mode(cfg: &RunConfig, rows: &mut [SweepRow]) {
    if cfg.exponent_mode != ExponentMode::Slope {
        return;
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for row in rows.iter_mut() {
        if let Some(e) = row.eq_error {
            if e > 0.0 {
                xs.push(row.n as f64);
                ys.push(-e.ln());
            }
        }
        if xs.len() >= 2 {
            row.exponent = Some(ols_slope(&xs, &ys));
        }
    }
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// One point of a best-response curve.
#[derive(Debug, Clone, Serialize)]
pub struct BestResponsePoint {
    pub q_index: usize,
    pub q1: f64,
    pub threshold: usize,
}

/// Both best-response curves at a fixed n: the defender's best threshold
/// for every grid point, and the attacker's best grid point for every
/// threshold in a window around the defender's response to the cost
/// minimizer.
#[derive(Debug, Clone, Serialize)]
pub struct BestResponseScan {
    pub n: usize,
    pub window_lo: usize,
    pub window_hi: usize,
    pub defender: Vec<BestResponsePoint>,
    pub attacker: Vec<BestResponsePoint>,
    /// A grid point and threshold that are mutual best responses, if the
    /// two curves meet on the grid.
    pub intersection: Option<BestResponsePoint>,
}

pub fn run_best_response_scan(cfg: &RunConfig) -> Result<BestResponseScan> {
    let n = cfg.single_n()?;
    let spec = cfg.bayes_spec(n)?;
    let grid = spec.grid();

    // Window of thresholds centered on the response to the cost minimizer.
    let report = check_assumptions(&spec);
    let center = defender_best_response(&spec, report.qstar_index)?;
    let width = cfg.br_window.max(1);
    let window_lo = center.saturating_sub(width / 2);
    let window_hi = (window_lo + width - 1).min(n + 1);

    let defender: Vec<BestResponsePoint> = (0..grid.len())
        .map(|j| {
            Ok(BestResponsePoint {
                q_index: j,
                q1: grid.q1(j),
                threshold: defender_best_response(&spec, j)?,
            })
        })
        .collect::<Result<_>>()?;

    let attacker: Vec<BestResponsePoint> = (window_lo..=window_hi)
        .map(|k| {
            let rule = ThresholdRule::deterministic(n, k)?;
            let j = attacker_best_response(&spec, &rule)?;
            Ok(BestResponsePoint {
                q_index: j,
                q1: grid.q1(j),
                threshold: k,
            })
        })
        .collect::<Result<_>>()?;

    let mut intersection = None;
    for point in &defender {
        let k = point.threshold;
        if k < window_lo || k > window_hi {
            continue;
        }
        let attacker_reply = &attacker[k - window_lo];
        if attacker_reply.q_index == point.q_index {
            intersection = Some(point.clone());
            break;
        }
    }

    Ok(BestResponseScan {
        n,
        window_lo,
        window_hi,
        defender,
        attacker,
        intersection,
    })
}

/// Serializable mirror of the core assumption report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub a1_holds: bool,
    pub a2_holds: bool,
    pub a3_holds: bool,
    pub a4_holds: bool,
    pub a4_balance_point: f64,
    pub qstar: f64,
    pub qstar_index: usize,
    pub notes: Vec<String>,
}

pub fn run_check(cfg: &RunConfig) -> Result<CheckOutcome> {
    let n = if cfg.n_values.is_empty() {
        1
    } else {
        cfg.n_list()?[0]
    };
    let spec = cfg.bayes_spec(n)?;
    let report = check_assumptions(&spec);
    Ok(CheckOutcome {
        a1_holds: report.a1_holds,
        a2_holds: report.a2_holds,
        a3_holds: report.a3_holds,
        a4_holds: report.a4_holds,
        a4_balance_point: report.a4_balance_point,
        qstar: report.qstar,
        qstar_index: report.qstar_index,
        notes: report.notes,
    })
}

/// A single named scalar, for the chernoff/stein commands.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarOutcome {
    pub name: &'static str,
    pub value: f64,
}

pub fn run_chernoff(cfg: &RunConfig) -> Result<ScalarOutcome> {
    let (p, q) = cfg.hypothesis_pair()?;
    Ok(ScalarOutcome {
        name: "chernoff_exponent",
        value: chernoff_exponent(&p, &q, cfg.chernoff_tol)?,
    })
}

pub fn run_stein(cfg: &RunConfig) -> Result<ScalarOutcome> {
    let (p, q) = cfg.hypothesis_pair()?;
    Ok(ScalarOutcome {
        name: "stein_exponent",
        value: stein_exponent(&p, &q)?,
    })
}
