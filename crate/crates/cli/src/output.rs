use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Everything needed to rerun a command and check its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub duration_secs: f64,
    pub grid: Option<String>,
    pub argv: Vec<String>,
    pub output: Option<PathBuf>,
    pub summary: Option<serde_json::Value>,
}

pub fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: Format, mut w: W) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for row in rows {
                csv.serialize(row)?;
            }
            csv.flush()
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)
        }
    }
}

/// Write the table to `<out>.csv` / `<out>.json`, or to stdout without
/// `--out`. Returns the path written.
pub fn emit<T: Serialize>(rows: &[T], format: Format, out: Option<&Path>) -> io::Result<Option<PathBuf>> {
    match out {
        None => {
            write_rows(rows, format, io::stdout().lock())?;
            Ok(None)
        }
        Some(prefix) => {
            let path = with_extension(prefix, format.extension());
            write_rows(rows, format, io::BufWriter::new(File::create(&path)?))?;
            Ok(Some(path))
        }
    }
}

pub fn write_manifest(prefix: &Path, manifest: &RunManifest) -> io::Result<PathBuf> {
    let path = with_extension(prefix, "manifest.json");
    let mut w = io::BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, manifest)?;
    writeln!(w)?;
    Ok(path)
}

pub fn read_manifest(path: &Path) -> io::Result<RunManifest> {
    let file = File::open(path)?;
    serde_json::from_reader(io::BufReader::new(file)).map_err(io::Error::other)
}
