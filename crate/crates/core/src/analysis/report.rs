//! Plain-text probe reports: `key: value` lines, optionally followed by one
//! comma-separated table.
//!
//! ```text
//! probe: dominance
//! trials: 5000
//! passed: true
//! table: cdf
//! count,p_cdf,q_cdf
//! 0,0.000000,0.001200
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Fixed-width rendering for terminals.
    pub fn to_aligned(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.header, &mut out);
        for row in &self.rows {
            line(row, &mut out);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Report {
    pub entries: Vec<(String, String)>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(probe: &str) -> Self {
        let mut report = Self::default();
        report.push("probe", probe);
        report
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn passed(&self) -> Option<bool> {
        self.get("passed").and_then(|v| v.parse().ok())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}: {v}");
        }
        if let Some(table) = &self.table {
            let _ = writeln!(out, "table: {}", table.name);
            let _ = writeln!(out, "{}", table.header.join(","));
            for row in &table.rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut report = Report::default();
        let mut lines = text.lines();
        while let Some(line) = lines.next() {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(": ")
                .or_else(|| line.strip_suffix(':').map(|k| (k, "")))
                .ok_or_else(|| Error::Parse(format!("expected `key: value`, got {line:?}")))?;
            if key == "table" {
                let header = lines
                    .next()
                    .ok_or_else(|| Error::Parse("table without header".into()))?;
                let header: Vec<String> = header.split(',').map(str::to_string).collect();
                let mut rows = Vec::new();
                for row in lines.by_ref() {
                    if row.trim().is_empty() {
                        break;
                    }
                    let cells: Vec<String> = row.split(',').map(str::to_string).collect();
                    if cells.len() != header.len() {
                        return Err(Error::Parse(format!(
                            "table row has {} cells, header has {}",
                            cells.len(),
                            header.len()
                        )));
                    }
                    rows.push(cells);
                }
                report.table = Some(Table {
                    name: value.to_string(),
                    header,
                    rows,
                });
            } else {
                report.push(key, value);
            }
        }
        Ok(report)
    }
}
