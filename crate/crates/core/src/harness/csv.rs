//! One CSV file per `(fitness, n, r)` series:
//!
//! ```text
//! K,mean_iterations,std_iterations,success_rate
//! 100,1234.50,200.000,1.00000
//! ```
//!
//! Numbers carry 6 significant digits in plain decimal notation; cells
//! without a successful run print `nan` for mean and deviation.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::sweep::{CellResult, SweepResult};
use crate::error::{Error, Result};

pub const HEADER: &str = "K,mean_iterations,std_iterations,success_rate";

/// Decimal rendering with 6 significant digits, e.g. `1234.50`, `200.000`,
/// `0.00123000`, `1234570`.
pub fn format_sig6(v: f64) -> String {
    if !v.is_finite() {
        return "nan".into();
    }
    if v == 0.0 {
        return "0.00000".into();
    }
    // the exponent after rounding to 6 significant digits
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp >= 5 {
        let sign = if mantissa.starts_with('-') { "-" } else { "" };
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        format!("{sign}{digits}{}", "0".repeat((exp - 5) as usize))
    } else {
        format!("{:.*}", (5 - exp) as usize, v)
    }
}

fn row(cell: &CellResult) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), format_sig6);
    format!(
        "{},{},{},{}",
        cell.k,
        opt(cell.mean_iterations),
        opt(cell.std_iterations),
        format_sig6(cell.success_rate())
    )
}

/// CSV text of the series for alphabet size `r`, rows by ascending K.
pub fn series_csv(result: &SweepResult, r: usize) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for cell in result.series(r) {
        let _ = writeln!(out, "{}", row(cell));
    }
    out
}

pub fn series_file_name(result: &SweepResult, r: usize) -> String {
    format!(
        "{}-n{}-r{}.csv",
        result.spec.family.as_str(),
        result.spec.n,
        r
    )
}

/// Writes every series of `result` into `dir` and returns the paths.
pub fn emit_csv(result: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>> {
    if result.cells.is_empty() {
        return Err(Error::EmptyResult("sweep result has no cells".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    result
        .r_values()
        .into_iter()
        .map(|r| {
            let path = dir.join(series_file_name(result, r));
            fs::write(&path, series_csv(result, r)).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// One parsed data row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub k: u32,
    pub mean_iterations: Option<f64>,
    pub std_iterations: Option<f64>,
    pub success_rate: f64,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(HEADER) => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header {HEADER:?}, got {other:?}"
            )))
        }
    }
    let num = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::Parse(format!("bad number {s:?}")))
    };
    let opt = |s: &str| -> Result<Option<f64>> {
        if s == "nan" {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("expected 4 fields in {line:?}")));
            }
            Ok(CsvRow {
                k: f[0]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad K {:?}", f[0])))?,
                mean_iterations: opt(f[1])?,
                std_iterations: opt(f[2])?,
                success_rate: num(f[3])?,
            })
        })
        .collect()
}
