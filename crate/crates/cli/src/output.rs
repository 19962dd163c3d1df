//! Artifact writing with an embedded provenance header.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a command: its normalized configuration,
/// the seed and digests of the files it read.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Provenance {
    pub fn new(
        command: &'static str,
        config: &impl Serialize,
        seed: Option<u64>,
        inputs: &[&Path],
    ) -> Result<Self, CliError> {
        let config = serde_json::to_value(config).map_err(|e| CliError::config(e.to_string()))?;
        let canonical = json!({ "command": command, "config": config }).to_string();
        let inputs = inputs
            .iter()
            .map(|p| {
                let bytes = fs::read(p)
                    .map_err(|e| CliError::Data(format!("cannot read {}: {e}", p.display())))?;
                Ok(InputDigest {
                    path: p.display().to_string(),
                    sha256: sha256_hex(&bytes),
                })
            })
            .collect::<Result<_, CliError>>()?;
        Ok(Self {
            tool: "surrocal",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_hash: sha256_hex(canonical.as_bytes()),
            seed,
            config,
            inputs,
        })
    }

    fn csv_comment(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# tool: {}\n", self.tool));
        s.push_str(&format!("# version: {}\n", self.version));
        s.push_str(&format!("# command: {}\n", self.command));
        s.push_str(&format!("# config_hash: {}\n", self.config_hash));
        match self.seed {
            Some(seed) => s.push_str(&format!("# seed: {seed}\n")),
            None => s.push_str("# seed: none\n"),
        }
        s.push_str(&format!("# config: {}\n", self.config));
        for i in &self.inputs {
            s.push_str(&format!("# input: {} sha256={}\n", i.path, i.sha256));
        }
        s
    }
}

/// A rendered result: a JSON value and an equivalent CSV table.
pub struct Artifact {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra `#` lines written after the provenance block in CSV output.
    pub notes: Vec<String>,
}

impl Artifact {
    pub fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Self {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            notes: Vec::new(),
        }
    }
}

pub fn render(prov: &Provenance, artifact: &Artifact, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let doc = json!({ "provenance": prov, "result": artifact.json });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let body = csv_table(artifact).map_err(|e| CliError::Output(e.to_string()))?;
            let body = String::from_utf8(body).map_err(|e| CliError::Output(e.to_string()))?;
            let mut text = prov.csv_comment();
            for n in &artifact.notes {
                text.push_str(&format!("# {n}\n"));
            }
            Ok(text + &body)
        }
    }
}

fn csv_table(artifact: &Artifact) -> Result<Vec<u8>, Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&artifact.header)?;
    for r in &artifact.rows {
        w.write_record(r)?;
    }
    Ok(w.into_inner()?)
}

pub fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

pub fn num(v: f64) -> String {
    v.to_string()
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
