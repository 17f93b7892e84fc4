//! CSV input for estimating MI between two data columns.

use std::path::Path;

use crate::error::{Error, Result};

/// A table of numeric columns read from a CSV file with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Columns {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Columns {
    /// Column by header name, or by 0-based index when `key` is an integer.
    pub fn get(&self, key: &str) -> Option<&[f64]> {
        let idx = self.headers.iter().position(|h| h == key).or_else(|| {
            key.parse::<usize>()
                .ok()
                .filter(|&i| i < self.columns.len())
        })?;
        Some(&self.columns[idx])
    }
}

pub fn parse_columns(text: &str, origin: &Path) -> Result<Columns> {
    let bad = |message: String| Error::Format {
        path: origin.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                bad(format!(
                    "row {}, column `{}`: `{field}` is not a number",
                    row + 2,
                    headers[col]
                ))
            })?;
            if !v.is_finite() {
                return Err(bad(format!("row {}: non-finite value", row + 2)));
            }
            columns[col].push(v);
        }
    }
    Ok(Columns { headers, columns })
}

pub fn read_columns(path: &Path) -> Result<Columns> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_columns(&text, path)
}
