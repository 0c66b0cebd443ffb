//! Scenario artifacts: `series.csv`, `fits.json`, `summary.json`.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fit::DecayFit;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = "flag")]
    Flag,
}

/// One pass/fail check. `margin = value / threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub margin: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.to_string(),
            passed: value <= threshold,
            value,
            threshold,
            comparison: Comparison::AtMost,
            margin: value / threshold,
            detail: String::new(),
        }
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.to_string(),
            passed: value >= threshold,
            value,
            threshold,
            comparison: Comparison::AtLeast,
            margin: value / threshold,
            detail: String::new(),
        }
    }

    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Check { passed: value > threshold, comparison: Comparison::Above, ..Check::at_least(name, value, threshold) }
    }

    pub fn flag(name: &str, passed: bool) -> Self {
        Check {
            name: name.to_string(),
            passed,
            value: if passed { 1.0 } else { 0.0 },
            threshold: 1.0,
            comparison: Comparison::Flag,
            margin: if passed { 1.0 } else { 0.0 },
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub name: String,
    pub kind: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub info: BTreeMap<String, serde_json::Value>,
}

impl Summary {
    pub fn new(name: &str, kind: &str) -> Self {
        Summary {
            schema_version: SCHEMA_VERSION,
            name: name.to_string(),
            kind: kind.to_string(),
            passed: true,
            checks: Vec::new(),
            info: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn info(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.info.insert(key.to_string(), v);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Columnar numeric table; the first column is conventionally `t`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(columns: Vec<String>) -> Self {
        Series { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// RFC 4180 CSV with every value printed to 17 significant digits.
    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
        }
        w.into_inner().map_err(|e| io::Error::other(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub label: String,
    pub fit: DecayFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theory: Option<f64>,
}

#[derive(Debug, Serialize)]
struct FitsFile<'a> {
    schema_version: u32,
    fits: &'a [FitRecord],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub summary: Summary,
    pub series: Series,
    pub fits: Vec<FitRecord>,
    /// Additional named artifacts (e.g. binary snapshots).
    pub files: Vec<(String, Vec<u8>)>,
}

impl ScenarioOutput {
    pub fn new(summary: Summary, series: Series) -> Self {
        ScenarioOutput { summary, series, fits: Vec::new(), files: Vec::new() }
    }

    pub fn fits_json(&self) -> String {
        let f = FitsFile { schema_version: SCHEMA_VERSION, fits: &self.fits };
        serde_json::to_string_pretty(&f).expect("fits serialize")
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }

    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("series.csv"), self.series.to_csv()?)?;
        fs::write(dir.join("fits.json"), self.fits_json() + "\n")?;
        fs::write(dir.join("summary.json"), self.summary_json() + "\n")?;
        for (name, bytes) in &self.files {
            fs::write(dir.join(name), bytes)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_and_summary() {
        let mut s = Summary::new("x", "modal-ode");
        s.push(Check::at_most("err", 1e-9, 1e-8));
        assert!(s.passed);
        s.push(Check::at_least("rate", 0.01, 0.03));
        assert!(!s.passed);
        assert!((s.check("err").unwrap().margin - 0.1).abs() < 1e-15);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"schema_version\":1") && json.contains("\"comparison\":\">=\""));
    }

    #[test]
    fn csv_round_trips_full_precision() {
        let mut s = Series::new(vec!["t".into(), "a".into()]);
        let v = 0.1 + 0.2;
        s.push(vec![1.0 / 3.0, v]);
        let text = String::from_utf8(s.to_csv().unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,a"));
        let vals: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(vals, vec![1.0 / 3.0, v]);
        assert_eq!(s.column("a"), Some(vec![v]));
    }
}
