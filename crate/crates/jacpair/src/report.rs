//! Comparison rows and their CSV / JSON renderings.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format};

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 9] =
    ["class", "observed_count", "total", "proportion", "wilson_lo", "wilson_hi", "observed_ratio", "expected_ratio", "z_score"];

/// One line of a report.
///
/// For class rows the ratios are `freq(trivial) / freq(class)` and
/// `|Γ|·|Aut(Γ, δ)|` (Haar runs use the exact finite-`n` ratio). For moment
/// rows the ratio columns hold the observed and predicted means, and the
/// count is the number of usable trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub class: String,
    pub observed_count: u64,
    pub total: u64,
    pub proportion: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub observed_ratio: Option<f64>,
    pub expected_ratio: Option<f64>,
    pub z_score: Option<f64>,
}

/// A finished experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub software: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub total_trials: u64,
    pub discarded: u64,
    pub rows: Vec<ComparisonRow>,
    pub flags: Vec<String>,
}

impl Report {
    pub fn row(&self, class: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.class == class)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

pub fn to_csv(rows: &[ComparisonRow]) -> Result<String, ReportError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let ser = |e: csv::Error| ReportError::Serialize(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(ser)?;
    for r in rows {
        w.serialize(r).map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Serialize(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn from_csv(text: &str) -> Result<Vec<ComparisonRow>, ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().collect::<Result<_, _>>().map_err(|e| ReportError::Serialize(e.to_string()))
}

pub fn to_json(report: &Report) -> Result<String, ReportError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| ReportError::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<Report, ReportError> {
    serde_json::from_str(text).map_err(|e| ReportError::Serialize(e.to_string()))
}

pub fn render(report: &Report, format: Format) -> Result<String, ReportError> {
    match format {
        Format::Csv => to_csv(&report.rows),
        Format::Json => to_json(report),
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<(), ReportError> {
    let text = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| ReportError::Io { path: p.to_path_buf(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| ReportError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentKind;

    fn sample() -> Report {
        Report {
            software: "jacpair".into(),
            version: "0.1.0".into(),
            seed: 9,
            config: ExperimentConfig::new(ExperimentKind::GraphPairingFreq),
            total_trials: 10,
            discarded: 2,
            rows: vec![
                ComparisonRow {
                    class: "1".into(),
                    observed_count: 4,
                    total: 10,
                    proportion: 0.4,
                    wilson_lo: 0.1681,
                    wilson_hi: 0.6873,
                    observed_ratio: Some(1.0),
                    expected_ratio: Some(1.0),
                    z_score: None,
                },
                ComparisonRow {
                    class: "other(order=16)".into(),
                    observed_count: 6,
                    total: 10,
                    proportion: 0.6,
                    wilson_lo: 0.3127,
                    wilson_hi: 0.8318,
                    observed_ratio: Some(2.0 / 3.0),
                    expected_ratio: None,
                    z_score: Some(-0.1),
                },
            ],
            flags: vec!["x".into()],
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(to_csv(&[]).unwrap(), CSV_COLUMNS.join(",") + "\n");
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        let text = to_csv(&r.rows).unwrap();
        assert!(text.starts_with("class,observed_count,total,proportion,wilson_lo,wilson_hi,observed_ratio,expected_ratio,z_score\n"));
        assert!(text.contains("1,4,10,0.4,0.1681,0.6873,1.0,1.0,\n"), "{text}");
        assert_eq!(from_csv(&text).unwrap(), r.rows);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = to_json(&r).unwrap();
        assert_eq!(from_json(&text).unwrap(), r);
        assert!(text.contains("\"version\": \"0.1.0\""));
        assert!(text.contains("\"seed\": 9"));
    }

    #[test]
    fn write_errors_carry_the_path() {
        let err = emit_report(&sample(), Format::Csv, Some(Path::new("/nonexistent/dir/r.csv"))).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/r.csv"));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        emit_report(&sample(), Format::Json, Some(&p)).unwrap();
        assert_eq!(from_json(&std::fs::read_to_string(&p).unwrap()).unwrap(), sample());
    }
}
