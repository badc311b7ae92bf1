use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) if *v != 0.0 && v.is_finite() && (v.abs() < 1e-4 || v.abs() >= 1e15) => {
                write!(f, "{v:e}")
            }
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Text(v) => f.write_str(v),
        }
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Where a table came from, written as `#` lines ahead of the CSV header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

/// Rectangular result table plus named scalar summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub provenance: Provenance,
    pub summary: Vec<(String, f64)>,
    /// Free-text lines written into the header.
    pub notes: Vec<String>,
}

impl ResultTable {
    pub fn new(columns: &[&str], provenance: Provenance) -> Self {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            provenance,
            summary: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::LengthMismatch {
                expected: self.columns.len(),
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn add_summary(&mut self, key: impl Into<String>, value: f64) {
        self.summary.push((key.into(), value));
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column; text cells come back as NaN.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    /// Rows whose text column `name` equals `value`.
    pub fn filter_rows<'a>(&'a self, name: &str, value: &'a str) -> impl Iterator<Item = &'a Vec<Cell>> + 'a {
        let i = self.column_index(name);
        self.rows
            .iter()
            .filter(move |r| i.is_some_and(|i| r[i].as_str() == Some(value)))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut out = String::new();
        let p = &self.provenance;
        out.push_str(&format!("# wavemod {}\n", p.version));
        out.push_str(&format!("# experiment: {}\n", p.experiment));
        out.push_str(&format!("# config_sha256: {}\n", p.config_hash));
        out.push_str(&format!("# seed: {}\n", p.seed));
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k} = {}\n", Cell::Float(*v)));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?);
        Ok(out)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
