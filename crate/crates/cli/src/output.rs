//! CSV and JSON writers. CSV files open with one `#`-prefixed JSON metadata line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use softcrack::{PerturbationResult, SignClass};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Output(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Shortest round-trip text, in exponent form outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}

pub fn write_json(path: Option<&Path>, doc: &serde_json::Value) -> Result<(), CliError> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, doc).map_err(io_err)?;
    writeln!(w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

/// Rows of already-formatted cells under a fixed header.
pub struct Table {
    meta: serde_json::Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(meta: serde_json::Value, header: &[&'static str]) -> Self {
        Self { meta, header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: Option<&Path>, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = sink(path)?;
                writeln!(w, "# {}", self.meta).map_err(io_err)?;
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(&self.header).map_err(io_err)?;
                for row in &self.rows {
                    csv.write_record(row).map_err(io_err)?;
                }
                csv.flush().map_err(io_err)
            }
            Format::Json => {
                let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
                    .rows
                    .iter()
                    .map(|row| {
                        self.header
                            .iter()
                            .zip(row)
                            .map(|(k, v)| {
                                let value = match v.parse::<f64>() {
                                    Ok(x) if x.is_finite() => serde_json::json!(x),
                                    _ if v.is_empty() => serde_json::Value::Null,
                                    _ => serde_json::Value::String(v.clone()),
                                };
                                (k.to_string(), value)
                            })
                            .collect()
                    })
                    .collect();
                write_json(path, &serde_json::json!({ "meta": self.meta, "rows": rows }))
            }
        }
    }
}

/// Plain (P2) greyscale raster: rows follow `φ`, columns `α`; shielding is
/// black, neutral mid-grey, amplifying white.
pub fn write_pgm(path: &Path, grid: &[Vec<PerturbationResult>]) -> Result<(), CliError> {
    let mut w = sink(Some(path))?;
    let width = grid.first().map_or(0, Vec::len);
    writeln!(w, "P2\n{width} {}\n255", grid.len()).map_err(io_err)?;
    for row in grid {
        let line: Vec<&str> = row
            .iter()
            .map(|c| match c.sign {
                SignClass::Shielding => "0",
                SignClass::Neutral => "128",
                SignClass::Amplifying => "255",
            })
            .collect();
        writeln!(w, "{}", line.join(" ")).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
