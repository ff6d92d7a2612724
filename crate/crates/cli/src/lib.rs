//! Experiment runner for adversarial hypothesis-testing games: ingest a
//! flat config, sweep over sample counts, solve the game instances with
//! [`htg_core`], and emit plot-ready CSV plus a JSON run manifest.

pub mod config;
pub mod emit;
pub mod run;

mod error;

pub use error::{CliError, Result};
