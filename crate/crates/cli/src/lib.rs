//! Command-line front end for the `lemlab-core` harnesses.
//!
//! A [`RunConfig`] names one harness, its parameters and a seed. [`run`] executes it and
//! returns a [`RunReport`]; with an output directory it also writes `report.json` and any
//! plot data. [`replay`] re-executes a stored report and demands a byte-identical payload.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod input;

use std::fs;
use std::path::Path;
use std::time::Instant;

pub use config::{Command, MathParams, RunConfig, RunReport, SCHEMA_VERSION};
pub use error::{CliError, CliResult};

use error::io_err;

pub const REPORT_FILE: &str = "report.json";

/// Reads and embeds the input document named by `cfg.input`, unless one is already embedded.
pub fn load_input(cfg: &mut RunConfig) -> CliResult<()> {
    if cfg.input_doc.is_some() || !cfg.command.needs_input() {
        return Ok(());
    }
    let path = cfg
        .input
        .clone()
        .ok_or(CliError::MissingParam { command: cfg.command.name(), what: "--input" })?;
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let doc = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    cfg.input_doc = Some(doc);
    Ok(())
}

/// Executes exactly one harness. Writes the report and artifacts when `cfg.out` is set.
pub fn run(cfg: &RunConfig) -> CliResult<RunReport> {
    let mut cfg = cfg.clone();
    load_input(&mut cfg)?;
    let start = Instant::now();
    let outcome = commands::execute(&cfg)?;
    let wall_clock_secs = start.elapsed().as_secs_f64();
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        payload: outcome.payload,
        wall_clock_secs,
        artifacts: outcome.artifacts.iter().map(|a| a.name.clone()).collect(),
    };
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        for a in &outcome.artifacts {
            let path = dir.join(&a.name);
            fs::write(&path, &a.contents).map_err(io_err(&path))?;
        }
        report.artifacts.insert(0, REPORT_FILE.to_string());
        let path = dir.join(REPORT_FILE);
        fs::write(&path, serde_json::to_string_pretty(&report)?).map_err(io_err(&path))?;
    }
    Ok(report)
}

/// The serialized payload, as compared by [`replay`].
pub fn payload_bytes(report: &RunReport) -> CliResult<String> {
    Ok(serde_json::to_string(&report.payload)?)
}

/// Reads a report, checking the schema version before anything else.
pub fn read_report(path: &Path) -> CliResult<RunReport> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    let found = raw.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0);
    if found != SCHEMA_VERSION as u64 {
        return Err(CliError::SchemaMismatch { found, expected: SCHEMA_VERSION });
    }
    Ok(serde_json::from_value(raw)?)
}

/// Re-executes the embedded configuration without writing files and compares payloads.
pub fn replay(path: &Path) -> CliResult<RunReport> {
    let stored = read_report(path)?;
    let mut cfg = stored.config.clone();
    cfg.out = None;
    let fresh = run(&cfg)?;
    let (a, b) = (payload_bytes(&stored)?, payload_bytes(&fresh)?);
    if a != b {
        let at = a.bytes().zip(b.bytes()).take_while(|(x, y)| x == y).count();
        let lo = at.saturating_sub(40);
        return Err(CliError::ReplayMismatch {
            detail: format!(
                "first difference at byte {at}: stored `{}` vs replayed `{}`",
                a.get(lo..(at + 40).min(a.len())).unwrap_or(""),
                b.get(lo..(at + 40).min(b.len())).unwrap_or("")
            ),
        });
    }
    Ok(fresh)
}

/// Exit code for a finished run: 0 for pass or inconclusive, 2 for a violated bound.
pub fn exit_code(report: &RunReport) -> i32 {
    match report.payload.verdict {
        lemlab_core::Verdict::Fail => 2,
        _ => 0,
    }
}
