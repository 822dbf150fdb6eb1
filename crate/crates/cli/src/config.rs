//! `--config` files: one `key value` pair per line, `#` starts a comment.
//! Command-line flags take precedence over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

const KEYS: &[&str] = &[
    "field", "field-poly", "table", "group", "torsion", "m", "k", "x", "event", "tolerance", "threads", "bound",
    "l-cutoff", "verify", "format",
];

struct Entry {
    value: String,
    line: usize,
    column: usize,
}

#[derive(Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Config::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let (key, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let key = if key == "generators" { "group" } else { key };
            if !KEYS.contains(&key) {
                bail!("parse error at line {}, column {}: unknown key '{key}'", idx + 1, indent + 1);
            }
            let rest = rest.trim();
            let column = line.find(rest).map_or(indent + key.len() + 2, |c| c + 1);
            if rest.is_empty() {
                bail!("parse error at line {}, column {column}: missing value for '{key}'", idx + 1);
            }
            entries.insert(key.to_string(), Entry { value: rest.to_string(), line: idx + 1, column });
        }
        Ok(Config { entries })
    }

    /// `flag` if given, else the parsed config value for `key`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|err| {
                anyhow::anyhow!("parse error at line {}, column {}: {key}: {err}", e.line, e.column)
            }),
        }
    }
}

/// Integer that may be written in scientific notation, e.g. `1e7`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Count(pub u64);

impl FromStr for Count {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(n) = s.parse::<u64>() {
            return Ok(Count(n));
        }
        let f: f64 = s.parse().map_err(|_| format!("expected a positive integer, found '{s}'"))?;
        if f < 0.0 || f.fract() != 0.0 || f > 2f64.powi(53) {
            return Err(format!("expected a positive integer, found '{s}'"));
        }
        Ok(Count(f as u64))
    }
}
