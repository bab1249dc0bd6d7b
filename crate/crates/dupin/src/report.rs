use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One checked identity or property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationCase {
    pub suite: String,
    pub case_id: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// `None` when the computation itself failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub runtime_ms: u64,
    pub seed: u64,
}

impl VerificationCase {
    /// `pass` iff `residual ≤ tolerance`; an `Err` becomes `error` with the
    /// message stored under the `error` parameter.
    pub fn judge(
        suite: &str,
        case_id: String,
        mut params: BTreeMap<String, String>,
        residual: Result<f64, String>,
        tolerance: f64,
        runtime_ms: u64,
        seed: u64,
    ) -> Self {
        let (status, residual) = match residual {
            Ok(r) if r <= tolerance => (Status::Pass, Some(r)),
            Ok(r) => (Status::Fail, Some(r)),
            Err(msg) => {
                params.insert("error".into(), msg);
                (Status::Error, None)
            }
        };
        VerificationCase { suite: suite.into(), case_id, params, status, residual, tolerance, runtime_ms, seed }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub run: RunInfo,
    pub cases: Vec<VerificationCase>,
}

impl Report {
    pub fn new(seed: u64, cases: Vec<VerificationCase>) -> Self {
        Report { run: RunInfo { seed, version: env!("CARGO_PKG_VERSION").into() }, cases }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// The columns written to CSV; `params` is not part of the CSV layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub suite: String,
    pub case_id: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub runtime_ms: u64,
    pub seed: u64,
}

impl From<&VerificationCase> for CsvRecord {
    fn from(c: &VerificationCase) -> Self {
        CsvRecord {
            suite: c.suite.clone(),
            case_id: c.case_id.clone(),
            status: c.status,
            residual: c.residual,
            tolerance: c.tolerance,
            runtime_ms: c.runtime_ms,
            seed: c.seed,
        }
    }
}

pub fn write_json<W: Write>(report: &Report, writer: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(writer, report)?;
    Ok(())
}

pub fn write_csv<W: Write>(cases: &[VerificationCase], writer: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(writer);
    // the header is written by the first record; an empty run still gets one
    if cases.is_empty() {
        w.write_record(["suite", "case_id", "status", "residual", "tolerance", "runtime_ms", "seed"])?;
    }
    for c in cases {
        w.serialize(CsvRecord::from(c))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<CsvRecord>, CliError> {
    let mut r = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

pub fn emit_report(cases: &[VerificationCase], seed: u64, path: &Path, format: ReportFormat) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::Write { path: path.to_path_buf(), source: e })?;
    let mut out = BufWriter::new(file);
    match format {
        ReportFormat::Json => write_json(&Report::new(seed, cases.to_vec()), &mut out)?,
        ReportFormat::Csv => write_csv(cases, &mut out)?,
    }
    out.flush().map_err(|e| CliError::Write { path: path.to_path_buf(), source: e })?;
    Ok(())
}
