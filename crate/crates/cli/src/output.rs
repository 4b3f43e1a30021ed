//! CSV tables with a fixed six-decimal rendering and a round-trip column for
//! every float.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

pub fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

/// Shortest representation that parses back to the same `f64`.
pub fn full(v: f64) -> String {
    format!("{v}")
}

pub fn opt_fixed(v: Option<f64>) -> String {
    v.map(fixed).unwrap_or_default()
}

pub fn opt_full(v: Option<f64>) -> String {
    v.map(full).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn get(&self, row: usize, name: &str) -> Option<&str> {
        Some(self.rows.get(row)?[self.column(name)?].as_str())
    }

    pub fn write<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Writes to `path`, or stdout when `None`.
    pub fn emit(&self, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(p) => self.write(File::create(p)?),
            None => self.write(io::stdout().lock()),
        }
    }
}
