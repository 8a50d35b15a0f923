//! Plot-ready CSV tables.
//!
//! * `f3_degree_dist`: `degree,count_before,count_after`, one row per
//!   in-degree value seen before or after reduction.
//! * `f4_scatter`: `id,count_before,count_after`, one row per node.
//! * `f5_dim_hist`: `source,target,N,P_or_N1N2,D`, one row per estimate.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dimension::FieldDimensionReport;
use crate::error::{Error, Result};
use crate::graph::{CitationGraph, Direction};
use crate::transitive::{tr_report_from, transitive_reduction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    F3DegreeDist,
    F4Scatter,
    F5DimHist,
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f3" | "f3_degree_dist" => Ok(Figure::F3DegreeDist),
            "f4" | "f4_scatter" => Ok(Figure::F4Scatter),
            "f5" | "f5_dim_hist" => Ok(Figure::F5DimHist),
            other => Err(Error::InvalidArgument(format!("unknown figure `{other}`"))),
        }
    }
}

pub fn write_degree_csv<W: Write>(before: &CitationGraph, after: &CitationGraph, mut w: W) -> Result<()> {
    let hb = before.degree_distribution(Direction::In);
    let ha = after.degree_distribution(Direction::In);
    let degrees: BTreeSet<usize> = hb.keys().chain(ha.keys()).copied().collect();
    writeln!(w, "degree,count_before,count_after")?;
    for d in degrees {
        writeln!(
            w,
            "{d},{},{}",
            hb.get(&d).copied().unwrap_or(0),
            ha.get(&d).copied().unwrap_or(0)
        )?;
    }
    Ok(())
}

pub fn write_scatter_csv<W: Write>(before: &CitationGraph, after: &CitationGraph, mut w: W) -> Result<()> {
    writeln!(w, "id,count_before,count_after")?;
    for row in tr_report_from(before, after).per_node_citations {
        writeln!(w, "{},{},{}", row.id, row.count_before, row.count_after)?;
    }
    Ok(())
}

pub fn write_estimates_csv<W: Write>(report: &FieldDimensionReport, mut w: W) -> Result<()> {
    writeln!(w, "source,target,N,P_or_N1N2,D")?;
    for e in &report.estimates {
        writeln!(
            w,
            "{},{},{},{},{}",
            e.source,
            e.target,
            e.size,
            e.relations_or_split(),
            e.dimension
        )?;
    }
    Ok(())
}

/// Writes the table behind `figure`. The dimension histogram needs a
/// previously computed report.
pub fn export_figure_data<W: Write>(
    g: &CitationGraph,
    figure: Figure,
    field_report: Option<&FieldDimensionReport>,
    w: W,
) -> Result<()> {
    match figure {
        Figure::F3DegreeDist => write_degree_csv(g, &transitive_reduction(g), w),
        Figure::F4Scatter => write_scatter_csv(g, &transitive_reduction(g), w),
        Figure::F5DimHist => {
            let report =
                field_report.ok_or_else(|| Error::InvalidArgument("f5_dim_hist needs a dimension report".into()))?;
            write_estimates_csv(report, w)
        }
    }
}
