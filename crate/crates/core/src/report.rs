//! Report rows for the verification pipelines, with CSV and JSON output.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

pub const CSV_HEADER: &str = "check_id,paper_anchor,value,reference,abs_err,rel_err,tolerance,pass,runtime_ms";

/// How a row's error is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `abs_err ≤ tolerance`
    Absolute,
    /// `rel_err ≤ tolerance`
    Relative,
    /// Negative control: passes when `abs_err > tolerance`.
    ExpectedFail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub check_id: String,
    pub paper_anchor: String,
    pub value: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub criterion: Criterion,
}

impl ReportRow {
    pub fn new(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        value: f64,
        reference: f64,
        tolerance: f64,
        criterion: Criterion,
    ) -> Self {
        let abs_err = (value - reference).abs();
        let rel_err = if reference != 0.0 { abs_err / reference.abs() } else { abs_err };
        let err = match criterion {
            Criterion::Relative => rel_err,
            _ => abs_err,
        };
        // NaN never passes
        let within = err <= tolerance;
        let pass = match criterion {
            Criterion::ExpectedFail => !within && !err.is_nan(),
            _ => within,
        };
        Self {
            check_id: check_id.into(),
            paper_anchor: anchor.into(),
            value,
            reference,
            abs_err,
            rel_err,
            tolerance,
            pass,
            runtime_ms: 0,
            criterion,
        }
    }

    /// `value` against zero.
    pub fn residual(check_id: impl Into<String>, anchor: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(check_id, anchor, value, 0.0, tolerance, Criterion::Absolute)
    }

    pub fn relative(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        value: f64,
        reference: f64,
        tolerance: f64,
    ) -> Self {
        Self::new(check_id, anchor, value, reference, tolerance, Criterion::Relative)
    }

    /// `value ≤ bound`, recorded with `abs_err = max(0, value - bound)`.
    pub fn at_most(check_id: impl Into<String>, anchor: impl Into<String>, value: f64, bound: f64, slack: f64) -> Self {
        let mut row = Self::new(check_id, anchor, value, bound, slack, Criterion::Absolute);
        row.abs_err = (value - bound).max(0.0);
        row.rel_err = if bound != 0.0 { row.abs_err / bound.abs() } else { row.abs_err };
        row.pass = row.abs_err <= slack;
        row
    }

    pub fn with_runtime(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{:e},{:e},{:e},{:e},{:e},{},{}",
            self.check_id,
            self.paper_anchor.replace(',', ";"),
            self.value,
            self.reference,
            self.abs_err,
            self.rel_err,
            self.tolerance,
            self.pass,
            self.runtime_ms
        )
    }
}

/// Rows accumulated by a pipeline, with per-row timing.
#[derive(Debug, Default)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `body`, stamps the elapsed time on every row it returns.
    pub fn timed<F: FnOnce() -> Result<Vec<ReportRow>>>(&mut self, body: F) -> Result<()> {
        let start = Instant::now();
        let rows = body()?;
        let ms = start.elapsed().as_millis() as u64;
        self.rows.extend(rows.into_iter().map(|r| r.with_runtime(ms)));
        Ok(())
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn find(&self, check_id: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.check_id == check_id)
    }

    pub fn zero_runtimes(&mut self) {
        for r in &mut self.rows {
            r.runtime_ms = 0;
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(out, "{}", r.csv_line())?;
        }
        Ok(())
    }

    pub fn summary(&self, subcommand: &str) -> Summary {
        Summary {
            subcommand: subcommand.to_string(),
            rows: self.rows.len(),
            passed: self.rows.iter().filter(|r| r.pass).count(),
            failed: self.rows.iter().filter(|r| !r.pass).map(|r| r.check_id.clone()).collect(),
            all_pass: self.all_pass(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub subcommand: String,
    pub rows: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub all_pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_error_within_tolerance() {
        assert!(ReportRow::residual("a", "x", 1e-4, 1e-3).pass);
        assert!(!ReportRow::residual("a", "x", 2e-3, 1e-3).pass);
        assert!(!ReportRow::residual("a", "x", f64::NAN, 1e-3).pass);
        let r = ReportRow::relative("b", "x", 2.002, 2.0, 1e-3);
        assert!(r.pass && (r.rel_err - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn expected_fail_is_inverted() {
        let r = ReportRow::new("c", "x", 0.5, 0.0, 1e-8, Criterion::ExpectedFail);
        assert!(r.pass);
        let r = ReportRow::new("c", "x", 0.0, 0.0, 1e-8, Criterion::ExpectedFail);
        assert!(!r.pass);
    }

    #[test]
    fn upper_bound_rows() {
        assert!(ReportRow::at_most("d", "x", 0.05, 0.1, 0.0).pass);
        let r = ReportRow::at_most("d", "x", 0.2, 0.1, 0.0);
        assert!(!r.pass && (r.abs_err - 0.1).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let mut rep = Report::new();
        rep.push(ReportRow::residual("id", "Eq, one", 1.0, 2.0));
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 9);
        assert!(lines[1].starts_with("id,Eq; one,"));
    }
}
