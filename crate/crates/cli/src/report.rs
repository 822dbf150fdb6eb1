//! Command output. Every command fills a `Report`: human-readable lines plus
//! flat records that back the CSV and JSON encodings.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

pub type Record = Vec<(&'static str, String)>;

#[derive(Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub records: Vec<Record>,
    /// Failed checks, listed on stderr; any entry makes the exit code nonzero.
    pub failures: Vec<String>,
}

impl Report {
    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        match format {
            Format::Text => {
                for line in &self.lines {
                    writeln!(out, "{line}")?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                if let Some(first) = self.records.first() {
                    w.write_record(first.iter().map(|(k, _)| *k))?;
                }
                for rec in &self.records {
                    w.write_record(rec.iter().map(|(_, v)| v.as_str()))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .records
                    .iter()
                    .map(|rec| {
                        serde_json::Value::Object(
                            rec.iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone()))).collect(),
                        )
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &rows)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Splits a rendered density `"17/24 ≈ 0.708333"` into value and decimal.
pub fn split_approx(rendered: &str) -> (String, String) {
    match rendered.split_once(" ≈ ") {
        Some((v, a)) => (v.to_string(), a.to_string()),
        None => (rendered.to_string(), rendered.to_string()),
    }
}

/// Aligned columns, two spaces apart.
pub fn align(rows: &[Vec<String>]) -> Vec<String> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    rows.iter()
        .map(|r| {
            let cells: Vec<String> =
                r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
            cells.join("  ").trim_end().to_string()
        })
        .collect()
}
