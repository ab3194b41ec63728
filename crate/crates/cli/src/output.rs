//! Row and summary serialization. Both encodings are line-oriented and
//! stable: rerunning the same sweep yields byte-identical output.

use std::io::{self, Write};

use serde::Serialize;

use crate::config::OutputFormat;
use crate::runner::{SweepRow, TheoremSummary};

/// Column layout of the CSV encoding.
pub const CSV_HEADER: &str =
    "theorem,trial,K,f_index,lambda,lhs_re,lhs_im,rhs_re,rhs_im,residual,bound,margin,pass";

#[derive(Serialize)]
struct RowWire<'a> {
    theorem: &'a str,
    trial: usize,
    #[serde(rename = "K")]
    k: &'a str,
    f_index: usize,
    lambda: Option<f64>,
    lhs: [f64; 2],
    rhs: [f64; 2],
    residual: f64,
    bound: Option<f64>,
    margin: Option<f64>,
    pass: bool,
    scale: f64,
}

impl<'a> From<&'a SweepRow> for RowWire<'a> {
    fn from(row: &'a SweepRow) -> Self {
        Self {
            theorem: row.report.theorem.name(),
            trial: row.trial,
            k: &row.subset,
            f_index: row.f_index,
            lambda: row.lambda,
            lhs: [row.report.lhs.re, row.report.lhs.im],
            rhs: [row.report.rhs.re, row.report.rhs.im],
            residual: row.report.residual,
            bound: row.report.bound,
            margin: row.report.margin,
            pass: row.report.pass,
            scale: row.report.scale,
        }
    }
}

fn opt_field(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_line(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        row.report.theorem.name(),
        row.trial,
        row.subset,
        row.f_index,
        opt_field(row.lambda),
        row.report.lhs.re,
        row.report.lhs.im,
        row.report.rhs.re,
        row.report.rhs.im,
        row.report.residual,
        opt_field(row.report.bound),
        opt_field(row.report.margin),
        row.report.pass,
    )
}

/// Writes rows as JSON lines or as CSV with [`CSV_HEADER`] on top.
pub fn write_rows<W: Write>(w: &mut W, rows: &[SweepRow], format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut *w, &RowWire::from(row)).map_err(io::Error::other)?;
                writeln!(w)?;
            }
        }
        OutputFormat::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for row in rows {
                writeln!(w, "{}", csv_line(row))?;
            }
        }
    }
    Ok(())
}

/// Writes the per-theorem aggregate as one JSON object keyed by theorem
/// name, in the order given.
pub fn write_summary<W: Write>(w: &mut W, summaries: &[TheoremSummary]) -> io::Result<()> {
    let mut map = serde_json::Map::new();
    for summary in summaries {
        let value = serde_json::to_value(summary).map_err(io::Error::other)?;
        map.insert(summary.theorem.name().to_string(), value);
    }
    serde_json::to_writer_pretty(&mut *w, &serde_json::Value::Object(map))
        .map_err(io::Error::other)?;
    writeln!(w)
}
