//! Minimal tab-separated tables with a header row.

use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Serializes with `\n` line endings and a trailing newline.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }

    /// Parses a table, checking that every row has the header's width.
    pub fn parse(source: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Format {
            path: source.to_owned(),
            line: 1,
            message: "missing header row".into(),
        })?;
        let mut table = Table::new(header.split('\t'));
        for (i, line) in lines {
            let row: Vec<String> = line.split('\t').map(str::to_owned).collect();
            if row.len() != table.header.len() {
                return Err(Error::Format {
                    path: source.to_owned(),
                    line: i + 1,
                    message: format!("expected {} fields, found {}", table.header.len(), row.len()),
                });
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}

/// Fixed three-decimal rendering used by metric tables.
pub fn fmt3(x: f64) -> String {
    format!("{x:.3}")
}
