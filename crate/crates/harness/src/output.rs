//! Checks, CSV tables with a versioned schema line, and JSON reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One asserted property of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// A CSV table: schema name and version go into a leading `#` line.
pub struct Table {
    pub schema: &'static str,
    pub version: u32,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &'static str, version: u32, header: &[&'static str]) -> Self {
        Self { schema, version, header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = format!("# honeycomb-anyons {} v{}\n", self.schema, self.version).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.header)?;
            for r in &self.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        Ok(out)
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf> {
        write_bytes(dir, name, &self.to_bytes()?)
    }
}

/// Reads a table written by [`Table::write`], skipping the schema line.
pub fn read_table(path: &Path) -> Result<(String, Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    let (schema, body) = match text.split_once('\n') {
        Some((first, rest)) if first.starts_with('#') => (first.trim_start_matches('#').trim().to_string(), rest),
        _ => (String::new(), text.as_str()),
    };
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.map(|x| x.iter().map(str::to_string).collect())).collect::<std::result::Result<_, _>>()?;
    Ok((schema, header, rows))
}

pub fn write_json<S: Serialize>(dir: &Path, name: &str, value: &S) -> Result<PathBuf> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_bytes(dir, name, &bytes)
}

pub fn write_bytes(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut f = fs::File::create(&path)?;
    f.write_all(bytes)?;
    Ok(path)
}

/// Shortest round-trip form, so identical runs give identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
