use std::io::{self, Write};
use std::path::Path;

use crate::automaton::{HighMode, LowMode};
use crate::cluster::FiredEvent;

pub const TRACE_HEADER: &str = "t,id,hmode,wmode,p,v,py,vy,phi,u,alphaT,leader,events";

/// State of one vehicle at one sample instant.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub id: u32,
    pub hmode: HighMode,
    pub wmode: LowMode,
    pub p: f64,
    pub v: f64,
    pub py: f64,
    pub vy: f64,
    pub phi: f64,
    pub u: f64,
    pub alpha: f64,
    /// `None` for the fictitious leader.
    pub leader: Option<u32>,
    /// Events fired since the previous sample of this vehicle.
    pub events: Vec<FiredEvent>,
}

impl TraceRecord {
    pub fn csv_line(&self) -> String {
        let leader = self.leader.map_or_else(|| "fict".to_string(), |l| l.to_string());
        let events: Vec<&str> = self.events.iter().map(|e| e.as_str()).collect();
        format!(
            "{:.6},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
            self.t,
            self.id,
            self.hmode,
            self.wmode,
            self.p,
            self.v,
            self.py,
            self.vy,
            self.phi,
            self.u,
            self.alpha,
            leader,
            events.join("|")
        )
    }
}

/// Writes the CSV trace and returns the number of bytes written.
pub fn write_trace<W: Write>(records: &[TraceRecord], mut out: W) -> io::Result<u64> {
    let mut bytes = 0u64;
    let mut line = |s: &str, out: &mut W| -> io::Result<()> {
        out.write_all(s.as_bytes())?;
        out.write_all(b"\n")?;
        bytes += s.len() as u64 + 1;
        Ok(())
    };
    line(TRACE_HEADER, &mut out)?;
    for r in records {
        line(&r.csv_line(), &mut out)?;
    }
    out.flush()?;
    Ok(bytes)
}

pub fn write_trace_file(records: &[TraceRecord], path: impl AsRef<Path>) -> io::Result<u64> {
    let file = std::fs::File::create(path)?;
    write_trace(records, io::BufWriter::new(file))
}

pub fn trace_to_string(records: &[TraceRecord]) -> String {
    let mut buf = Vec::new();
    write_trace(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("trace is ASCII")
}
