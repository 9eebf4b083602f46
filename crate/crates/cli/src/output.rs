//! Deterministic file output: fixed float formatting (17 significant
//! digits), LF line endings, comma-separated CSV with a header row, and
//! `#`-prefixed metadata lines embedding the resolved configuration.

use std::io::Write;
use std::path::Path;

use crate::CliError;

/// 17 significant digits, scientific; round-trips f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvWriter {
    buf: Vec<u8>,
}

impl CsvWriter {
    pub fn new() -> Self {
        Self { buf: Vec::new() }
    }

    /// `# key=value` metadata line.
    pub fn meta(&mut self, key: &str, value: impl AsRef<str>) {
        self.buf
            .extend_from_slice(format!("# {key}={}\n", value.as_ref()).as_bytes());
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.buf.extend_from_slice(cols.join(",").as_bytes());
        self.buf.push(b'\n');
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.extend_from_slice(fields.join(",").as_bytes());
        self.buf.push(b'\n');
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        write_bytes(path, &self.buf)
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::usage(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}
