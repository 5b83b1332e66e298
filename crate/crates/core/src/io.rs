//! CSV and JSON artifact helpers.

use std::path::Path;

use serde::Serialize;

use crate::error::{LabError, Result};

/// Nine significant digits, locale-free.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0.00000000e0"
        return "0.00000000e0".to_string();
    }
    format!("{x:.8e}")
}

/// A header plus rows of pre-formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|h| h.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Appends the rows of a table with the same header.
    pub fn append(&mut self, other: Table) {
        debug_assert_eq!(self.header, other.header);
        self.rows.extend(other.rows);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| LabError::Io(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| LabError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| LabError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| LabError::Io(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
