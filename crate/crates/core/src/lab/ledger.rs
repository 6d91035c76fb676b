use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LedgerRecord, Outcome, TheoremId};
use crate::error::{LabError, Result};

/// Append (or overwrite) records as JSON lines.
pub fn write_ledger(path: &Path, records: &[LedgerRecord], append: bool) -> Result<()> {
    let file = std::fs::OpenOptions::new()
        .create(true)
        .write(true)
        .append(append)
        .truncate(!append)
        .open(path)?;
    let mut w = std::io::BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ledger(path: &Path) -> Result<Vec<LedgerRecord>> {
    let r = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: LedgerRecord =
            serde_json::from_str(&line).map_err(|e| LabError::Schema(format!("ledger line {}: {e}", i + 1)))?;
        if rec.schema_version != super::SCHEMA_VERSION {
            return Err(LabError::Schema(format!(
                "ledger line {}: unsupported schema version {}",
                i + 1,
                rec.schema_version
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub invalid: usize,
    /// Largest observed value of each check.
    pub max_values: BTreeMap<String, f64>,
    pub mean_ms: f64,
    pub max_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub invalid: usize,
    pub by_theorem: BTreeMap<TheoremId, TheoremSummary>,
    /// `(scenario id, seed)` of every failed record.
    pub failing: Vec<(String, u64)>,
    pub exit_code: i32,
}

pub fn report(records: &[LedgerRecord]) -> Report {
    let mut rep = Report::default();
    for r in records {
        let t = rep.by_theorem.entry(r.theorem).or_default();
        t.total += 1;
        rep.total += 1;
        match r.outcome {
            Outcome::Pass => {
                t.passed += 1;
                rep.passed += 1;
            }
            Outcome::Fail => {
                t.failed += 1;
                rep.failed += 1;
                rep.failing.push((r.scenario_id.clone(), r.seed));
            }
            Outcome::InvalidInstance => {
                t.invalid += 1;
                rep.invalid += 1;
            }
        }
        for c in &r.checks {
            let e = t.max_values.entry(c.name.clone()).or_insert(f64::NEG_INFINITY);
            *e = e.max(c.value);
        }
        t.mean_ms += r.elapsed_ms;
        t.max_ms = t.max_ms.max(r.elapsed_ms);
    }
    for t in rep.by_theorem.values_mut() {
        t.mean_ms /= t.total as f64;
    }
    rep.exit_code = if rep.failed > 0 {
        1
    } else if rep.invalid > 0 {
        2
    } else {
        0
    };
    rep
}

impl Report {
    pub fn render(&self, format: ReportFormat) -> Result<String> {
        if format == ReportFormat::Json {
            return Ok(format!("{}\n", serde_json::to_string(self)?));
        }
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} records: {} pass, {} fail, {} invalid-instance",
            self.total, self.passed, self.failed, self.invalid
        );
        for (id, t) in &self.by_theorem {
            let _ = writeln!(
                s,
                "{id:<8} {:>5} pass {:>5} fail {:>5} invalid   mean {:.1} ms  max {:.1} ms",
                t.passed, t.failed, t.invalid, t.mean_ms, t.max_ms
            );
            for (name, v) in &t.max_values {
                let _ = writeln!(s, "    {name:<32} max {v:.3e}");
            }
        }
        for (id, seed) in &self.failing {
            let _ = writeln!(s, "FAIL {id} (seed {seed})");
        }
        Ok(s)
    }
}
