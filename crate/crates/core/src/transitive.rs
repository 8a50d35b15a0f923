//! Transitive reduction and closure of the citation DAG.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, NodeIndex};
use crate::reach::{ones, stripes, sweep_stripe};

pub const DEFAULT_CHUNK_SIZE: usize = 4096;
pub const DEFAULT_EDGE_BUDGET: u64 = 1_000_000_000;

/// Tuning for the striped sweeps. Peak memory per concurrently processed
/// stripe is about `node_count * chunk_size / 8` bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub chunk_size: usize,
    /// Upper bound on the number of edges a closure may materialize.
    pub edge_budget: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            chunk_size: DEFAULT_CHUNK_SIZE,
            edge_budget: DEFAULT_EDGE_BUDGET,
        }
    }
}

/// The unique transitive reduction, using the default configuration.
pub fn transitive_reduction(g: &CitationGraph) -> CitationGraph {
    transitive_reduction_with(g, &SweepConfig::default())
}

/// Keeps an edge `u -> v` iff `v` is not a descendant of another
/// out-neighbour of `u`.
pub fn transitive_reduction_with(g: &CitationGraph, config: &SweepConfig) -> CitationGraph {
    let parts: Vec<Vec<(u32, u32)>> = stripes(g.node_count(), config.chunk_size)
        .into_par_iter()
        .map(|(start, end)| {
            let mut kept = Vec::new();
            sweep_stripe(g, start, end, |u, _, direct| {
                kept.extend(direct.iter().map(|&v| (u as u32, v)));
            });
            kept
        })
        .collect();
    g.with_edges(parts.concat())
}

/// The transitive closure, using the default configuration.
pub fn transitive_closure(g: &CitationGraph) -> Result<CitationGraph> {
    transitive_closure_with(g, &SweepConfig::default())
}

/// Materializes an edge for every reachable pair, failing with
/// [`Error::EdgeBudgetExceeded`] once more than `edge_budget` edges would be
/// produced.
pub fn transitive_closure_with(g: &CitationGraph, config: &SweepConfig) -> Result<CitationGraph> {
    let budget = config.edge_budget;
    let produced = AtomicU64::new(0);
    let over = AtomicBool::new(false);
    let parts: Vec<Vec<(u32, u32)>> = stripes(g.node_count(), config.chunk_size)
        .into_par_iter()
        .map(|(start, end)| {
            let mut edges = Vec::new();
            if over.load(Ordering::Relaxed) {
                return edges;
            }
            sweep_stripe(g, start, end, |u, row, _| {
                if over.load(Ordering::Relaxed) {
                    return;
                }
                let count: u64 = row.iter().map(|w| u64::from(w.count_ones())).sum();
                if count == 0 {
                    return;
                }
                if produced.fetch_add(count, Ordering::Relaxed) + count > budget {
                    over.store(true, Ordering::Relaxed);
                    return;
                }
                edges.extend(ones(row).map(|c| (u as u32, (start + c) as u32)));
            });
            edges
        })
        .collect();
    if over.load(Ordering::Relaxed) {
        return Err(Error::EdgeBudgetExceeded { budget });
    }
    Ok(g.with_edges(parts.concat()))
}

/// Citation counts of one node before and after reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCitations {
    pub id: String,
    pub count_before: usize,
    pub count_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrReport {
    pub edges_before: usize,
    pub edges_after: usize,
    pub edge_loss_fraction: f64,
    pub per_node_citations: Vec<NodeCitations>,
}

/// Edge loss and per-node citation counts for `g` against its reduction.
pub fn tr_report(g: &CitationGraph) -> TrReport {
    tr_report_from(g, &transitive_reduction(g))
}

/// As [`tr_report`], for a reduction the caller has already computed.
pub fn tr_report_from(g: &CitationGraph, reduced: &CitationGraph) -> TrReport {
    let edges_before = g.edge_count();
    let edges_after = reduced.edge_count();
    let edge_loss_fraction = if edges_before == 0 {
        0.0
    } else {
        1.0 - edges_after as f64 / edges_before as f64
    };
    let per_node_citations = g
        .nodes()
        .map(|v| NodeCitations {
            id: g.id(v).to_string(),
            count_before: g.citation_count(v),
            count_after: reduced.citation_count(v),
        })
        .collect();
    TrReport {
        edges_before,
        edges_after,
        edge_loss_fraction,
        per_node_citations,
    }
}

/// Nodes ranked by citations surviving reduction, descending; ties go to the
/// higher raw count, then to the smaller id.
pub fn post_tr_ranking(g: &CitationGraph, top_k: usize) -> Vec<NodeCitations> {
    rank_citations(tr_report(g).per_node_citations, top_k)
}

pub fn rank_citations(mut rows: Vec<NodeCitations>, top_k: usize) -> Vec<NodeCitations> {
    rows.sort_by(|a, b| {
        b.count_after
            .cmp(&a.count_after)
            .then_with(|| b.count_before.cmp(&a.count_before))
            .then_with(|| a.id.cmp(&b.id))
    });
    rows.truncate(top_k);
    rows
}

/// Whether `u -> v` is implied by a path of length at least two.
pub fn is_implied(g: &CitationGraph, u: NodeIndex, v: NodeIndex) -> bool {
    g.out_neighbors(u)
        .iter()
        .filter(|&&w| w > v.0)
        .any(|&w| g.descendants(NodeIndex(w)).binary_search(&v).is_ok())
}
