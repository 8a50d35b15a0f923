//! Causally-aware analysis of citation networks.
//!
//! A citation network is a DAG whose nodes carry publication times and
//! whose edges always point from newer to older documents. This crate
//! builds such graphs from edge lists ([`ingest`], [`tsv`]), computes their
//! transitive reduction and closure ([`transitive`]), and estimates the
//! dimension of the underlying space-time from causal intervals
//! ([`intervals`], [`dimension`]). Uniformly sprinkled causal sets with a
//! known dimension ([`sprinkle`]) serve as ground truth.

pub mod dimension;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod intervals;
mod reach;
pub mod sprinkle;
pub mod synth;
pub mod transitive;
pub mod tsv;

pub use dimension::{
    box_counting_dimension, box_space_dimension, estimate_field_dimension, mm_dimension, mm_dimension_from_ratio,
    mm_ratio, DimensionEstimate, FieldConfig, FieldDimensionReport, Method,
};
pub use error::{Error, Result};
pub use export::{export_figure_data, Figure};
pub use graph::{CitationGraph, Direction, NodeIndex, TimedNode};
pub use ingest::{build_graph, IngestOptions, IngestReport};
pub use intervals::{count_relations, find_midpoint, interval, EndpointConvention, IntervalSummary, MidpointSplit};
pub use sprinkle::{sprinkle, Geometry, SprinkleSpec};
pub use transitive::{post_tr_ranking, tr_report, transitive_closure, transitive_reduction, SweepConfig, TrReport};
