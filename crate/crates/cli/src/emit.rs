//! Output emission: fixed-column CSV, the JSON run manifest, and atomic
//! file writes (temp file in the target directory, then rename, so readers
//! never observe a partial file and failed runs leave nothing behind).
//!
//! Floats are printed with Rust's shortest round-trip formatting, so a
//! re-run of an identical configuration reproduces the bytes exactly;
//! `wall_ms` is the one measured (non-reproducible) column.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::Result;
use crate::run::{BestResponseScan, SweepRow};

/// Column order of sweep CSV files.
pub const SWEEP_CSV_HEADER: &str = "n,eq_error,exponent,attacker_support_min,\
attacker_support_max,attacker_mode,defender_k_min,defender_k_max,status,wall_ms";

/// Shortest round-trip decimal representation; non-finite values print as
/// `inf`/`-inf`/`nan`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "nan".into())
}

fn fmt_opt_usize(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "nan".into())
}

fn sanitize_status(status: &str) -> String {
    status
        .replace(',', ";")
        .replace('\n', " ")
        .replace('\r', " ")
}

/// Sweep rows as CSV, header included. An empty slice yields just the
/// header line.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.n,
            fmt_opt_f64(row.eq_error),
            fmt_opt_f64(row.exponent),
            fmt_opt_f64(row.attacker_support_min),
            fmt_opt_f64(row.attacker_support_max),
            fmt_opt_f64(row.attacker_mode),
            fmt_opt_usize(row.defender_k_min),
            fmt_opt_usize(row.defender_k_max),
            sanitize_status(&row.status),
            row.wall_ms,
        );
    }
    out
}

/// Both best-response curves as CSV: `kind,q,k`.
pub fn best_response_csv(scan: &BestResponseScan) -> String {
    let mut out = String::from("kind,q,k\n");
    for point in &scan.defender {
        let _ = writeln!(out, "defender_br,{},{}", fmt_f64(point.q1), point.threshold);
    }
    for point in &scan.attacker {
        let _ = writeln!(out, "attacker_br,{},{}", fmt_f64(point.q1), point.threshold);
    }
    out
}

/// The run manifest: experiment name, library version, the fully resolved
/// config (defaults included), and the run's payload under `payload_key`.
pub fn manifest<T: Serialize>(cfg: &RunConfig, payload_key: &str, payload: &T) -> String {
    let mut doc = json!({
        "experiment": cfg.experiment.as_str(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
    });
    doc[payload_key] = serde_json::to_value(payload).expect("payload serializes");
    let mut text = serde_json::to_string_pretty(&doc).expect("manifest serializes");
    text.push('\n');
    text
}

/// Writes via a temp file in the destination directory plus rename. The
/// temp file is removed automatically if anything fails before the rename.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    if !parent.is_dir() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("output directory {} does not exist", parent.display()),
        )
        .into());
    }
    let mut tmp = tempfile::NamedTempFile::new_in(&parent)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes the configured CSV and JSON outputs for a sweep.
pub fn emit_sweep_outputs(cfg: &RunConfig, rows: &[SweepRow]) -> Result<()> {
    if let Some(path) = &cfg.out_csv {
        atomic_write(path, &sweep_csv(rows))?;
    }
    if let Some(path) = &cfg.out_json {
        atomic_write(path, &manifest(cfg, "rows", &rows))?;
    }
    Ok(())
}

pub fn emit_best_response_outputs(cfg: &RunConfig, scan: &BestResponseScan) -> Result<()> {
    if let Some(path) = &cfg.out_csv {
        atomic_write(path, &best_response_csv(scan))?;
    }
    if let Some(path) = &cfg.out_json {
        atomic_write(path, &manifest(cfg, "scan", scan))?;
    }
    Ok(())
}
