//! Output formatting: numbers, CSV files, JSON documents.

use std::fs;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Format a float with at least 12 significant digits while staying exactly
/// round-trippable: the shortest round-trip form is used whenever it already
/// carries 12 digits, otherwise the value is padded in exponential form.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let shortest = format!("{x}");
    if significant_digits(&shortest) >= 12 {
        shortest
    } else {
        format!("{x:.11e}")
    }
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    mantissa
        .chars()
        .filter(|c| c.is_ascii_digit())
        .skip_while(|&c| c == '0')
        .count()
}

/// Write a CSV file: header row, LF line endings, UTF-8.
pub fn write_csv(
    path: &Path,
    header: &str,
    rows: impl Iterator<Item = String>,
) -> Result<(), CliError> {
    let mut text = String::with_capacity(4096);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numeric(format!("serialization: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Resolve the output directory (CLI flag wins over config) and create it.
pub fn ensure_out_dir(config_dir: &str, cli_out: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = cli_out
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from(config_dir));
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}
