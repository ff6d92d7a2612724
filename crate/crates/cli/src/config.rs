//! Run configuration: defaults, the flat `key = value` config-file format,
//! and construction of validated game specs.
//!
//! Precedence is defaults < config file < command-line flags. Every key in
//! the file has a flag of the same name, and the fully resolved config —
//! including every defaulted value — is serialized into the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use htg_core::games::{BayesGameSpec, CostFunction, NpGameSpec};
use htg_core::prob::Distribution;
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ExponentSweepBayes,
    ExponentSweepNp,
    BestResponseScan,
    NpEquilibrium,
    Check,
    Chernoff,
    Stein,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::ExponentSweepBayes => "exponent_sweep_bayes",
            ExperimentKind::ExponentSweepNp => "exponent_sweep_np",
            ExperimentKind::BestResponseScan => "best_response_scan",
            ExperimentKind::NpEquilibrium => "np_equilibrium",
            ExperimentKind::Check => "check",
            ExperimentKind::Chernoff => "chernoff",
            ExperimentKind::Stein => "stein",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMode {
    Pointwise,
    Slope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    Abs,
    Quad,
    Tabulated,
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub p1: f64,
    pub q_lo: Option<f64>,
    pub q_hi: Option<f64>,
    pub grid_size: usize,
    pub gamma: f64,
    pub epsilon: f64,
    pub n_values: Vec<usize>,
    pub cost_kind: CostKind,
    pub cost_scale: f64,
    pub cost_qstar: Option<f64>,
    pub cost_values: Option<Vec<f64>>,
    pub exponent_mode: ExponentMode,
    pub jobs: usize,
    pub br_window: usize,
    pub lp_tol: f64,
    pub chernoff_tol: f64,
    /// Alternative hypothesis for the chernoff/stein commands (binary).
    pub q1: Option<f64>,
    /// General-alphabet hypotheses for chernoff/stein; override p1/q1.
    pub p_dist: Option<Vec<f64>>,
    pub q_dist: Option<Vec<f64>>,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(experiment: ExperimentKind) -> Self {
        RunConfig {
            experiment,
            p1: 0.5,
            q_lo: None,
            q_hi: None,
            grid_size: 100,
            gamma: 1.0,
            epsilon: 0.1,
            n_values: Vec::new(),
            cost_kind: CostKind::Abs,
            cost_scale: 1.0,
            cost_qstar: None,
            cost_values: None,
            exponent_mode: ExponentMode::Pointwise,
            jobs: 1,
            br_window: 20,
            lp_tol: 1e-9,
            chernoff_tol: 1e-10,
            q1: None,
            p_dist: None,
            q_dist: None,
            out_csv: None,
            out_json: None,
        }
    }

    /// Applies `key = value` pairs from a config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                )));
            };
            self.apply_kv(key.trim(), value.trim()).map_err(|e| {
                CliError::config(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
        }
        Ok(())
    }

    /// Applies one key/value pair (config-file syntax).
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => {
                if value != self.experiment.as_str() {
                    return Err(CliError::config(format!(
                        "config is for experiment `{value}`, but the `{}` subcommand was invoked",
                        self.experiment.as_str()
                    )));
                }
            }
            "p1" => self.p1 = parse_f64(key, value)?,
            "q_lo" => self.q_lo = Some(parse_f64(key, value)?),
            "q_hi" => self.q_hi = Some(parse_f64(key, value)?),
            "grid_size" => self.grid_size = parse_usize(key, value)?,
            "gamma" => self.gamma = parse_f64(key, value)?,
            "epsilon" => self.epsilon = parse_f64(key, value)?,
            "n" => self.n_values = parse_n_values(value)?,
            "cost_kind" => self.cost_kind = parse_cost_kind(value)?,
            "cost_scale" => self.cost_scale = parse_f64(key, value)?,
            "cost_qstar" => self.cost_qstar = Some(parse_f64(key, value)?),
            "cost_values" => self.cost_values = Some(parse_f64_list(key, value)?),
            "exponent_mode" => self.exponent_mode = parse_exponent_mode(value)?,
            "jobs" => self.jobs = parse_usize(key, value)?.max(1),
            "br_window" => self.br_window = parse_usize(key, value)?,
            "lp_tol" => self.lp_tol = parse_f64(key, value)?,
            "chernoff_tol" => self.chernoff_tol = parse_f64(key, value)?,
            "q1" => self.q1 = Some(parse_f64(key, value)?),
            "p_dist" => self.p_dist = Some(parse_f64_list(key, value)?),
            "q_dist" => self.q_dist = Some(parse_f64_list(key, value)?),
            "out_csv" => self.out_csv = Some(PathBuf::from(value)),
            "out_json" => self.out_json = Some(PathBuf::from(value)),
            _ => return Err(CliError::config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn cost_function(&self) -> Result<CostFunction> {
        match self.cost_kind {
            CostKind::Abs | CostKind::Quad => {
                let qstar = self.cost_qstar.ok_or_else(|| {
                    CliError::config("cost_qstar is required for abs/quad cost kinds")
                })?;
                if self.cost_kind == CostKind::Abs {
                    Ok(CostFunction::absolute(self.cost_scale, qstar)?)
                } else {
                    Ok(CostFunction::quadratic(self.cost_scale, qstar)?)
                }
            }
            CostKind::Tabulated => {
                let values = self
                    .cost_values
                    .clone()
                    .ok_or_else(|| CliError::config("cost_values is required for tabulated cost"))?;
                Ok(CostFunction::tabulated(values)?)
            }
        }
    }

    fn q_interval(&self) -> Result<(f64, f64)> {
        match (self.q_lo, self.q_hi) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(CliError::config("q_lo and q_hi are required")),
        }
    }

    pub fn bayes_spec(&self, n: usize) -> Result<BayesGameSpec> {
        let (lo, hi) = self.q_interval()?;
        Ok(BayesGameSpec::new(
            Distribution::binary(self.p1)?,
            lo,
            hi,
            self.grid_size,
            self.gamma,
            n,
            self.cost_function()?,
        )?)
    }

    pub fn np_spec(&self, n: usize) -> Result<NpGameSpec> {
        let (lo, hi) = self.q_interval()?;
        Ok(NpGameSpec::new(
            Distribution::binary(self.p1)?,
            lo,
            hi,
            self.grid_size,
            self.epsilon,
            n,
            self.cost_function()?,
        )?)
    }

    /// Hypotheses for the chernoff/stein commands: explicit vectors when
    /// given, binary `(p1, q1)` otherwise.
    pub fn hypothesis_pair(&self) -> Result<(Distribution, Distribution)> {
        let p = match &self.p_dist {
            Some(v) => Distribution::new(v.clone())?,
            None => Distribution::binary(self.p1)?,
        };
        let q = match &self.q_dist {
            Some(v) => Distribution::new(v.clone())?,
            None => {
                let q1 = self
                    .q1
                    .ok_or_else(|| CliError::config("q1 (or q_dist) is required"))?;
                Distribution::binary(q1)?
            }
        };
        Ok((p, q))
    }

    /// The n list, validated nonempty and strictly increasing.
    pub fn n_list(&self) -> Result<&[usize]> {
        if self.n_values.is_empty() {
            return Err(CliError::config("n is required (single value, list, or start:stop:step)"));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::config("n values must be strictly increasing"));
        }
        Ok(&self.n_values)
    }

    /// The single n required by single-instance experiments.
    pub fn single_n(&self) -> Result<usize> {
        let list = self.n_list()?;
        if list.len() != 1 {
            return Err(CliError::config(format!(
                "{} expects exactly one n, got {}",
                self.experiment.as_str(),
                list.len()
            )));
        }
        Ok(list[0])
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| CliError::config(format!("{key}: cannot parse `{value}` as a number")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| CliError::config(format!("{key}: cannot parse `{value}` as an integer")))
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| parse_f64(key, s.trim()))
        .collect()
}

/// `start:stop:step`, a comma list, or a single integer.
pub fn parse_n_values(value: &str) -> Result<Vec<usize>> {
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::config(format!(
                "n: expected start:stop:step, got `{value}`"
            )));
        }
        let start = parse_usize("n", parts[0].trim())?;
        let stop = parse_usize("n", parts[1].trim())?;
        let step = parse_usize("n", parts[2].trim())?;
        if step == 0 || start > stop {
            return Err(CliError::config(format!("n: empty range `{value}`")));
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        value
            .split(',')
            .map(|s| parse_usize("n", s.trim()))
            .collect()
    }
}

fn parse_cost_kind(value: &str) -> Result<CostKind> {
    match value {
        "abs" => Ok(CostKind::Abs),
        "quad" => Ok(CostKind::Quad),
        "tabulated" => Ok(CostKind::Tabulated),
        _ => Err(CliError::config(format!(
            "cost_kind: expected abs|quad|tabulated, got `{value}`"
        ))),
    }
}

fn parse_exponent_mode(value: &str) -> Result<ExponentMode> {
    match value {
        "pointwise" => Ok(ExponentMode::Pointwise),
        "slope" => Ok(ExponentMode::Slope),
        _ => Err(CliError::config(format!(
            "exponent_mode: expected pointwise|slope, got `{value}`"
        ))),
    }
}
