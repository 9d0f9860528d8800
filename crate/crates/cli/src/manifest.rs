//! Run manifest: everything needed to reproduce a run, plus how it ended.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::source::{GraphInfo, Origin};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    UsageError,
    InputError,
    BudgetExceeded,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub command: &'static str,
    pub argv: Vec<String>,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seed: Option<u64>,
    pub workers: usize,
    pub budget_secs: Option<f64>,
    pub inputs: Vec<Origin>,
    pub graphs: Vec<GraphInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    /// Parameters after defaults were resolved.
    pub params: Value,
    pub wall_clock_secs: f64,
    pub outputs: Vec<PathBuf>,
    /// Extra per-command results (generator statistics, measured speedups).
    #[serde(skip_serializing_if = "Value::is_null")]
    pub results: Value,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            core_version: kpath::VERSION,
            command,
            argv: std::env::args().collect(),
            status: Status::Ok,
            exit_code: 0,
            error: None,
            seed: None,
            workers: 1,
            budget_secs: None,
            inputs: Vec::new(),
            graphs: Vec::new(),
            algorithm: None,
            params: Value::Null,
            wall_clock_secs: 0.0,
            outputs: Vec::new(),
            results: Value::Null,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        out.flush()
    }
}

/// `--manifest` when given, else next to the primary output, else in the working
/// directory.
pub fn default_path(command: &str, out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => p.with_extension("manifest.json"),
        None => PathBuf::from(format!("kpath-{command}.manifest.json")),
    }
}

/// The mean RA-κpath speedup recorded by an earlier comparison run.
pub fn prior_kpath_speedup(path: &Path) -> Result<f64, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{} is not valid JSON: {e}", path.display()))?;
    value["results"]["kpath_speedup"].as_f64().ok_or_else(|| format!("{} records no RA-kpath speedup", path.display()))
}
