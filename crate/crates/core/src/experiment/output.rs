//! CSV summaries and JSONL step traces.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::runner::SummaryRow;
use crate::error::{Error, Result};
use crate::model::{ScheduleStep, Source};

pub const CSV_HEADER: &str = "trial,seed,n,p,protocol,adversary,mode,steps_executed,stabilization_steps,\
rounds_observed,min_length,median_length,median_stretch,max_stretch,epidemic_finish,random_step_fraction";

fn out_err(e: impl std::fmt::Display) -> Error {
    Error::Output(e.to_string())
}

pub fn write_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(',')).map_err(out_err)?;
    for r in rows {
        w.serialize(r).map_err(out_err)?;
    }
    w.flush().map_err(out_err)
}

pub fn emit_csv(rows: &[SummaryRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(out_err)
}

pub fn parse_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(out_err)?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Output(format!("unexpected CSV header {}", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(out_err)).collect()
}

/// One line of a step trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: u64,
    pub initiator: usize,
    pub responder: usize,
    pub source: Source,
    pub coin: Option<bool>,
}

impl From<&ScheduleStep> for TraceRecord {
    fn from(s: &ScheduleStep) -> Self {
        Self {
            step: s.step_index,
            initiator: s.interaction.initiator.index(),
            responder: s.interaction.responder.index(),
            source: s.source,
            coin: s.coin,
        }
    }
}

pub fn write_jsonl<W: Write>(steps: &[ScheduleStep], mut out: W) -> Result<()> {
    for s in steps {
        serde_json::to_writer(&mut out, &TraceRecord::from(s)).map_err(out_err)?;
        out.write_all(b"\n").map_err(out_err)?;
    }
    Ok(())
}

pub fn emit_jsonl(steps: &[ScheduleStep]) -> Result<String> {
    let mut buf = Vec::new();
    write_jsonl(steps, &mut buf)?;
    String::from_utf8(buf).map_err(out_err)
}
