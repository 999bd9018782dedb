//! Output sinks: CSV with a schema header (or line-delimited JSON) plus
//! a run manifest with content digests when writing to files.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Recorded alongside every file output; replaying the stored argv must
/// reproduce the digests bit-for-bit.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Full argument vector (without the binary path).
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
    pub threads: usize,
    pub duration_secs: f64,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Collects rows and writes them as CSV (`#`-prefixed schema header) or
/// line-delimited JSON objects.
pub struct Sink {
    pub json: bool,
    schema: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Sink {
    pub fn new(json: bool, schema: &[&'static str]) -> Self {
        Sink {
            json,
            schema: schema.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.schema.len());
        self.rows.push(cells.to_vec());
    }

    pub fn render(&self, subcommand: &str) -> String {
        let mut out = String::new();
        if self.json {
            for row in &self.rows {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .schema
                    .iter()
                    .zip(row)
                    .map(|(k, v)| {
                        let val = v
                            .parse::<f64>()
                            .map(|f| {
                                serde_json::Number::from_f64(f)
                                    .map(serde_json::Value::Number)
                                    .unwrap_or_else(|| serde_json::Value::String(v.clone()))
                            })
                            .unwrap_or_else(|_| serde_json::Value::String(v.clone()));
                        (k.to_string(), val)
                    })
                    .collect();
                out.push_str(&serde_json::Value::Object(obj).to_string());
                out.push('\n');
            }
        } else {
            out.push_str(&format!(
                "# fracwalk-csv v1; subcommand: {subcommand}; columns: {}\n",
                self.schema.join(",")
            ));
            for row in &self.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        out
    }
}

/// Format an f64 with the shortest representation that round-trips.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_output(
    content: &str,
    out_path: Option<&Path>,
    manifest: &mut RunManifest,
) -> Result<()> {
    match out_path {
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .context("writing stdout")?;
        }
        Some(path) => {
            std::fs::write(path, content)
                .with_context(|| format!("writing {}", path.display()))?;
            let mut hasher = Sha256::new();
            hasher.update(content.as_bytes());
            manifest.outputs.push(OutputDigest {
                path: path.display().to_string(),
                sha256: hex::encode(hasher.finalize()),
                bytes: content.len(),
            });
        }
    }
    Ok(())
}

/// Write the manifest next to the primary output file.
pub fn write_manifest(manifest: &RunManifest, out_path: &Path) -> Result<PathBuf> {
    let mpath = out_path.with_extension(format!(
        "{}manifest.json",
        out_path
            .extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    std::fs::write(&mpath, serde_json::to_string_pretty(manifest)?)
        .with_context(|| format!("writing {}", mpath.display()))?;
    Ok(mpath)
}
