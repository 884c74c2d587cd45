//! Table rows and their markdown, CSV and JSON renderings.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use edlab::db::Database;
use edlab::dsl::GapId;
use edlab::ed::export::{explanation, format_interval};
use edlab::ed::{Inference, TraceStep};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    #[serde(rename = "gapId")]
    pub gap_id: GapId,
    pub structure: String,
    pub rd: usize,
    #[serde(rename = "edLo")]
    pub ed_lo: usize,
    #[serde(rename = "edHi")]
    pub ed_hi: usize,
    pub explanation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<TraceStep>>,
}

/// Non-abelian, non-auxiliary groups of order `lo..=hi`, by label.
pub fn rows(db: &Database, inf: &Inference, lo: usize, hi: usize, traces: bool) -> Vec<OutputRecord> {
    db.records()
        .iter()
        .filter(|r| !r.entry.auxiliary && (lo..=hi).contains(&r.id().order))
        .filter(|r| !r.group.is_abelian())
        .filter_map(|r| inf.get(r.id()))
        .map(|f| OutputRecord {
            gap_id: f.id,
            structure: f.structure.clone(),
            rd: f.rd,
            ed_lo: f.lo,
            ed_hi: f.hi,
            explanation: explanation(f),
            traces: traces.then(|| f.traces.clone()),
        })
        .collect()
}

pub fn write_table(rows: &[OutputRecord], format: TableFormat, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        TableFormat::Markdown => {
            writeln!(out, "| GAP Id | Structure | Rd | Ed | Explanation |")?;
            writeln!(out, "|---|---|---|---|---|")?;
            for r in rows {
                writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    r.gap_id,
                    r.structure,
                    r.rd,
                    format_interval(r.ed_lo, r.ed_hi),
                    r.explanation
                )?;
            }
        }
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(["order", "index", "structure", "rd", "ed_lo", "ed_hi", "rule"])?;
            for r in rows {
                w.write_record([
                    r.gap_id.order.to_string(),
                    r.gap_id.index.to_string(),
                    r.structure.clone(),
                    r.rd.to_string(),
                    r.ed_lo.to_string(),
                    r.ed_hi.to_string(),
                    r.explanation.clone(),
                ])?;
            }
            w.flush()?;
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
