//! Results CSV: one row per [`CriticalRecord`], header row required.
//!
//! `seeds_tried` is a `;`-separated list of seeds, `critical_dim` is an
//! integer or `not-found`, and `search_trace` is a `;`-separated list of
//! `dim:min_violations` probes in search order.

use std::fs::OpenOptions;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::search::{CriticalRecord, TraceEntry};
use crate::error::{MedError, Result};

pub const RESULTS_HEADER: &str = "m,k,scoring,critical_dim,seeds_tried,wall_time_s,search_trace";

const NOT_FOUND: &str = "not-found";

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    m: usize,
    k: usize,
    scoring: String,
    critical_dim: String,
    seeds_tried: String,
    wall_time_s: String,
    search_trace: String,
}

impl From<&CriticalRecord> for Row {
    fn from(r: &CriticalRecord) -> Self {
        Row {
            m: r.m,
            k: r.k,
            scoring: r.scoring.to_string(),
            critical_dim: r
                .critical_dim
                .map_or_else(|| NOT_FOUND.to_string(), |d| d.to_string()),
            seeds_tried: join(r.seeds_tried.iter()),
            wall_time_s: format!("{:.3}", r.wall_time),
            search_trace: join(
                r.search_trace
                    .iter()
                    .map(|t| format!("{}:{}", t.dim, t.min_violations)),
            ),
        }
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn bad(line: usize, detail: String) -> MedError {
    MedError::Parse { line, detail }
}

impl Row {
    fn into_record(self, line: usize) -> Result<CriticalRecord> {
        let scoring = self.scoring.parse()?;
        let critical_dim = match self.critical_dim.as_str() {
            NOT_FOUND => None,
            v => Some(
                v.parse()
                    .map_err(|e| bad(line, format!("critical_dim {v:?}: {e}")))?,
            ),
        };
        let seeds_tried = split(&self.seeds_tried)
            .map(|s| s.parse().map_err(|e| bad(line, format!("seed {s:?}: {e}"))))
            .collect::<Result<_>>()?;
        let wall_time = self
            .wall_time_s
            .parse()
            .map_err(|e| bad(line, format!("wall_time_s: {e}")))?;
        let search_trace = split(&self.search_trace)
            .map(|t| {
                let (d, v) = t
                    .split_once(':')
                    .ok_or_else(|| bad(line, format!("trace entry {t:?}")))?;
                Ok(TraceEntry {
                    dim: d
                        .parse()
                        .map_err(|e| bad(line, format!("trace dim: {e}")))?,
                    min_violations: v
                        .parse()
                        .map_err(|e| bad(line, format!("trace violations: {e}")))?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CriticalRecord {
            m: self.m,
            k: self.k,
            scoring,
            critical_dim,
            search_trace,
            seeds_tried,
            wall_time,
        })
    }
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(';').filter(|p| !p.is_empty())
}

/// Appends one row, writing the header first if the file is new or empty.
pub fn append_record(path: &Path, record: &CriticalRecord) -> Result<()> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let needs_header = file.metadata()?.len() == 0;
    let mut w = csv::WriterBuilder::new()
        .has_headers(needs_header)
        .from_writer(file);
    w.serialize(Row::from(record))?;
    w.flush()?;
    Ok(())
}

/// Replaces `path` with the given records.
pub fn write_records(path: &Path, records: &[CriticalRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if records.is_empty() {
        w.write_record(RESULTS_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(Row::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<CriticalRecord>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        out.push(row?.into_record(i + 2)?);
    }
    Ok(out)
}
