//! Tab-separated node and edge files.
//!
//! Node files hold `id<TAB>time` lines, edge files `citing<TAB>cited`.
//! Blank lines and lines starting with `#` are ignored. A timestamp is either
//! a floating point number or an ISO-8601 calendar date (`YYYY-MM-DD`), which
//! is converted to days since 1970-01-01; one file may not mix the two.

use std::io::{self, BufRead, Write};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, TimedNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TimeKind {
    Number,
    Date,
}

fn parse_time(raw: &str) -> Option<(f64, TimeKind)> {
    if let Ok(x) = raw.parse::<f64>() {
        return Some((x, TimeKind::Number));
    }
    let date = NaiveDate::parse_from_str(raw, "%Y-%m-%d").ok()?;
    let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch");
    Some(((date - epoch).num_days() as f64, TimeKind::Date))
}

fn io_error(line: usize, e: io::Error) -> Error {
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Iterates `(line_number, fields)` over the data lines of a TSV stream.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(io_error(i + 1, e))),
        Ok(l) => {
            let t = l.trim_end_matches('\r');
            if t.trim().is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, t.to_string())))
            }
        }
    })
}

fn two_fields(line_no: usize, line: &str) -> Result<(String, String)> {
    let mut parts = line.split('\t');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.trim().to_string())),
        _ => Err(Error::Parse {
            line: line_no,
            message: format!("expected two non-empty tab-separated fields, got `{line}`"),
        }),
    }
}

pub fn read_nodes<R: BufRead>(reader: R) -> Result<Vec<TimedNode>> {
    let mut kind = None;
    let mut nodes = Vec::new();
    for item in data_lines(reader) {
        let (line_no, line) = item?;
        let (id, raw) = two_fields(line_no, &line)?;
        let (time, k) = parse_time(&raw).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("`{raw}` is neither a number nor a YYYY-MM-DD date"),
        })?;
        match kind {
            None => kind = Some(k),
            Some(prev) if prev != k => return Err(Error::MixedTimestamps { line: line_no }),
            _ => {}
        }
        nodes.push(TimedNode { id, time });
    }
    Ok(nodes)
}

pub fn read_edges<R: BufRead>(reader: R) -> Result<Vec<(String, String)>> {
    data_lines(reader)
        .map(|item| {
            let (line_no, line) = item?;
            two_fields(line_no, &line)
        })
        .collect()
}

/// Writes nodes in canonical order. Times use the shortest representation
/// that parses back to the same value.
pub fn write_nodes<W: Write>(g: &CitationGraph, mut w: W) -> io::Result<()> {
    for v in g.nodes() {
        writeln!(w, "{}\t{}", g.id(v), g.time(v))?;
    }
    Ok(())
}

pub fn write_edges<W: Write>(g: &CitationGraph, mut w: W) -> io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(w, "{}\t{}", g.id(u), g.id(v))?;
    }
    Ok(())
}
