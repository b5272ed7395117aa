//! Run reports, input digests and output writing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// How a run ended, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Decided,
    Unknown,
    Failed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Decided => 0,
            Status::Failed => 1,
            Status::Unknown => 2,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub result: Value,
    pub table: Option<Table>,
    pub status: Status,
    /// Emit `result` as-is instead of wrapping it in a [`RunReport`].
    pub raw: bool,
}

impl Outcome {
    pub fn report(result: impl Serialize, status: Status) -> Result<Self> {
        Ok(Outcome {
            result: serde_json::to_value(result)?,
            table: None,
            status,
            raw: false,
        })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Reads input files and records their digests.
#[derive(Debug, Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.digests.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub version: &'static str,
    pub seed: u64,
    pub result: Value,
}

pub fn resolve_format(format: Option<Format>, out: Option<&PathBuf>) -> Format {
    format.unwrap_or_else(|| match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        _ => Format::Json,
    })
}

pub fn render(outcome: &Outcome, format: Format, report: impl FnOnce(Value) -> RunReport) -> Result<String> {
    match format {
        Format::Csv => match &outcome.table {
            Some(t) => t.to_csv(),
            None => bail!("this command has no CSV output"),
        },
        Format::Json if outcome.raw => Ok(serde_json::to_string_pretty(&outcome.result)? + "\n"),
        Format::Json => Ok(serde_json::to_string_pretty(&report(outcome.result.clone()))? + "\n"),
    }
}

pub fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
