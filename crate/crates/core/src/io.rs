//! Configuration documents and matrix files.
//!
//! A configuration is a JSON object `{"label": ..., "cylinders": [{"t",
//! "p", "x", "y", "omega", "a", "b"}, ...]}` with angles in radians. Floats
//! are written in shortest round-trip form, so reading back reproduces every
//! parameter bit for bit.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Configuration;
use crate::matrix::IntegerMatrix;

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn config_to_json(config: &Configuration) -> String {
    serde_json::to_string_pretty(config).expect("configuration serializes")
}

/// Parses and validates a configuration document.
pub fn config_from_json(text: &str) -> Result<Configuration> {
    let raw: Configuration = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Configuration::new(raw.cylinders, raw.label)
}

pub fn read_config(path: &Path) -> Result<Configuration> {
    config_from_json(&fs::read_to_string(path).map_err(|e| io_err(path, e))?)
}

pub fn write_config(path: &Path, config: &Configuration) -> Result<()> {
    fs::write(path, config_to_json(config) + "\n").map_err(|e| io_err(path, e))
}

pub fn read_matrix(path: &Path) -> Result<IntegerMatrix> {
    IntegerMatrix::parse_text(&fs::read_to_string(path).map_err(|e| io_err(path, e))?)
}

pub fn write_matrix(path: &Path, m: &IntegerMatrix) -> Result<()> {
    fs::write(path, m.to_text()).map_err(|e| io_err(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}
