//! Machine-readable run reports: one JSON document or one CSV table per run.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub passes: u64,
    pub failures: u64,
    pub inconclusive: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<u64>,
}

impl Summary {
    pub fn record(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.passes += 1,
            Verdict::Fail => self.failures += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }

    pub fn absorb(&mut self, other: &Summary) {
        self.passes += other.passes;
        self.failures += other.failures;
        self.inconclusive += other.inconclusive;
    }

    /// `1` on any certified violation, else `2` if anything is undecided, else `0`.
    pub fn exit_code(&self) -> i32 {
        if self.failures > 0 {
            1
        } else if self.inconclusive > 0 {
            2
        } else {
            0
        }
    }
}

/// Flat table used for CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
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

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: Value,
    pub results: Vec<Value>,
    pub summary: Summary,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    pub fn new(config: Value) -> Self {
        Report {
            config,
            results: Vec::new(),
            summary: Summary::default(),
            table: Table::default(),
        }
    }

    pub fn push_result<T: Serialize>(&mut self, entry: &T) {
        self.results
            .push(serde_json::to_value(entry).expect("report entries serialize"));
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                out.write_all(b"\n")
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.table.header)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        buf
    }
}

/// Formats an `f64` so integers print without a fractional part and the
/// rest round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}").trim_end_matches(".0").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut s = Summary::default();
        s.record(Verdict::Pass);
        assert_eq!(s.exit_code(), 0);
        s.record(Verdict::Inconclusive);
        assert_eq!(s.exit_code(), 2);
        s.record(Verdict::Fail);
        assert_eq!(s.exit_code(), 1);
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new(serde_json::json!({"k_max": 3}));
        r.push_result(&serde_json::json!({"k": 1}));
        r.summary.passes = 1;
        let v: Value = serde_json::from_slice(&r.render(Format::Json)).unwrap();
        assert_eq!(v["config"]["k_max"], 3);
        assert_eq!(v["results"][0]["k"], 1);
        assert_eq!(v["summary"]["passes"], 1);
        assert!(v["summary"].get("min_slack").is_none());
    }

    #[test]
    fn csv_table() {
        let mut r = Report::new(Value::Null);
        r.table = Table::new(["a", "b"]);
        r.table.push([1, 2]);
        assert_eq!(
            String::from_utf8(r.render(Format::Csv)).unwrap(),
            "a,b\n1,2\n"
        );
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(3.0), "3");
        assert_eq!(fmt_f64(0.07), "0.07");
        assert_eq!(fmt_f64(1e-30), "1e-30");
    }
}
