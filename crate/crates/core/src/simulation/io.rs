//! SampleSet CSV table (`replicate_index,ell_hat,r_n`) and JSON sidecar.

use super::{SampleMeta, SampleSet};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const CSV_HEADER: &str = "replicate_index,ell_hat,r_n";

/// 17 significant digits in scientific notation; parses back to the same bits.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub replicate_index: u64,
    pub ell_hat: f64,
    pub r_n: f64,
}

fn parse_finite(field: &str, line: usize, name: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("line {line}: {name} {field:?} is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(format!("line {line}: {name} must be finite")))
    }
}

/// Parses the replicate table. Blank lines are ignored; the header is required.
pub fn parse_samples_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((_, h)) => return Err(Error::parse(format!("expected header {CSV_HEADER:?}, found {:?}", h.trim()))),
        None => return Err(Error::parse("empty sample table")),
    }
    lines
        .map(|(i, line)| {
            let no = i + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::parse(format!("line {no}: expected 3 fields, found {}", fields.len())));
            }
            let replicate_index = fields[0]
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("line {no}: bad replicate_index {:?}", fields[0])))?;
            Ok(CsvRow {
                replicate_index,
                ell_hat: parse_finite(fields[1], no, "ell_hat")?,
                r_n: parse_finite(fields[2], no, "r_n")?,
            })
        })
        .collect()
}

impl SampleMeta {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("sample sidecar: {e}")))
    }
}

/// `samples.csv` → `samples.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

impl SampleSet {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * (self.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in self.replicates() {
            let _ = writeln!(out, "{},{},{}", r.replicate_index, format_float(r.ell_hat), format_float(r.r_n));
        }
        out
    }

    pub fn from_csv_and_json(csv: &str, json: &str) -> Result<Self> {
        let meta = SampleMeta::from_json(json)?;
        SampleSet::from_parts(meta, parse_samples_csv(csv)?)
    }

    /// Writes the table to `csv` and the sidecar next to it.
    pub fn write_files(&self, csv: &Path) -> Result<PathBuf> {
        let sidecar = sidecar_path(csv);
        std::fs::write(csv, self.to_csv())?;
        std::fs::write(&sidecar, self.meta().to_json())?;
        Ok(sidecar)
    }

    pub fn read_files(csv: &Path) -> Result<Self> {
        let table = std::fs::read_to_string(csv)?;
        let sidecar = std::fs::read_to_string(sidecar_path(csv))?;
        Self::from_csv_and_json(&table, &sidecar)
    }
}
