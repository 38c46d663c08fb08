use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{OutputFormat, SweepRow, SweepTable};
use crate::error::{Error, Result};

pub const COLUMNS: [&str; 10] = [
    "H0", "tau0", "x", "Omega", "Omega0", "Gamma", "W_minus", "W_plus", "Delta_W", "S_z",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: Value,
    pub version: String,
    pub seed: u64,
    pub units: Value,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub metadata: Metadata,
    pub rows: Vec<SweepRow>,
}

fn units() -> Value {
    serde_json::json!({
        "H0": "G", "tau0": "s", "x": "1", "Omega": "rad/s", "Omega0": "rad/s",
        "Gamma": "1/s", "W_minus": "1", "W_plus": "1", "Delta_W": "1", "S_z": "hbar"
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

/// Writes the table as CSV (shortest round-trip scientific notation) or as
/// one JSON document with provenance metadata.
pub fn write_outputs(table: &SweepTable, format: OutputFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write_table(table, format, &mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Streams the table in the same layout as [`write_outputs`].
pub fn write_table(table: &SweepTable, format: OutputFormat, mut out: impl Write) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(COLUMNS)?;
            for row in &table.rows {
                w.write_record(row.values().iter().map(|v| format!("{v:e}")))?;
            }
            w.flush()
        }
        OutputFormat::Json => {
            let doc = SweepDocument {
                metadata: Metadata {
                    config: table.config.clone(),
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    seed: table.seed,
                    units: units(),
                    warnings: table.warnings.clone(),
                },
                rows: table.rows.clone(),
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.write_all(b"\n")
        }
    }
}

/// Reads a CSV written by [`write_outputs`].
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    r.deserialize().map(|row| row.map_err(|e| csv_err(path, e))).collect()
}

pub fn read_json(path: &Path) -> Result<SweepDocument> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
