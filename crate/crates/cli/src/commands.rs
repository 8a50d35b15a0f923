use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};
use chronocite::dimension::FieldDimensionReport;
use chronocite::export::{write_degree_csv, write_estimates_csv};
use chronocite::intervals::interval_with_split;
use chronocite::transitive::{tr_report_from, transitive_closure_with, transitive_reduction_with};
use chronocite::{
    build_graph, estimate_field_dimension, export_figure_data, post_tr_ranking, tsv, CitationGraph, EndpointConvention,
    FieldConfig, Figure, Geometry, IngestOptions, IngestReport, Method, SprinkleSpec, SweepConfig,
};
use serde::{Deserialize, Serialize};

use crate::output::{digest_file, FileDigest, OutputDir};
use crate::{
    ClosureArgs, DimensionArgs, ExportArgs, GraphInput, IngestArgs, IntervalArgs, RankArgs, SprinkleArgs, TrArgs,
    UsageError,
};

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(UsageError(format!("input file not found: {}", path.display())).into())
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn convention(include_endpoints: bool) -> EndpointConvention {
    if include_endpoints {
        EndpointConvention::Inclusive
    } else {
        EndpointConvention::Exclusive
    }
}

struct Loaded {
    graph: CitationGraph,
    report: IngestReport,
    digests: Vec<FileDigest>,
}

fn load_paths(nodes: &Path, edges: &Path, keep_equal_time: bool) -> Result<Loaded> {
    require_file(nodes)?;
    require_file(edges)?;
    let digests = vec![digest_file(nodes)?, digest_file(edges)?];
    let node_rows = tsv::read_nodes(open(nodes)?).with_context(|| format!("in {}", nodes.display()))?;
    let edge_rows = tsv::read_edges(open(edges)?).with_context(|| format!("in {}", edges.display()))?;
    let (graph, report) = build_graph(node_rows, edge_rows, IngestOptions { keep_equal_time })?;
    Ok(Loaded { graph, report, digests })
}

fn load(input: &GraphInput) -> Result<Loaded> {
    load_paths(&input.nodes, &input.edges, input.keep_equal_time)
}

fn write_edge_tsv(out: &mut OutputDir, name: &str, g: &CitationGraph) -> Result<()> {
    out.write(name, |w| Ok(tsv::write_edges(g, w)?))
}

pub fn ingest(args: &IngestArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let mut out = OutputDir::create(&args.out.out)?;
    out.write_json("ingest_report.json", &loaded.report)?;
    out.finish("ingest", args, loaded.digests)
}

pub fn tr(args: &TrArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let g = &loaded.graph;
    let cfg = SweepConfig {
        chunk_size: args.chunk_size.max(1),
        ..SweepConfig::default()
    };
    let reduced = transitive_reduction_with(g, &cfg);
    let report = tr_report_from(g, &reduced);
    let mut out = OutputDir::create(&args.out.out)?;
    write_edge_tsv(&mut out, "reduced_edges.tsv", &reduced)?;
    out.write_json("tr_report.json", &report)?;
    out.write("degree_hist.csv", |w| Ok(write_degree_csv(g, &reduced, w)?))?;
    out.finish("tr", args, loaded.digests)
}

pub fn closure(args: &ClosureArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let cfg = SweepConfig {
        chunk_size: args.chunk_size.max(1),
        edge_budget: args.edge_budget,
    };
    let closed = transitive_closure_with(&loaded.graph, &cfg)?;
    let mut out = OutputDir::create(&args.out.out)?;
    write_edge_tsv(&mut out, "closure_edges.tsv", &closed)?;
    out.finish("closure", args, loaded.digests)
}

#[derive(Serialize)]
struct IntervalJson<'a> {
    source: &'a str,
    target: &'a str,
    related: bool,
    convention: EndpointConvention,
    #[serde(rename = "N")]
    size: usize,
    #[serde(rename = "P")]
    relations: u64,
    midpoint: Option<MidpointJson<'a>>,
    members: Vec<&'a str>,
}

#[derive(Serialize)]
struct MidpointJson<'a> {
    id: &'a str,
    #[serde(rename = "N1")]
    n1: usize,
    #[serde(rename = "N2")]
    n2: usize,
}

pub fn interval(args: &IntervalArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let g = &loaded.graph;
    let s = g.index_of(&args.source)?;
    let t = g.index_of(&args.target)?;
    let (summary, split) = interval_with_split(g, s, t, convention(args.include_endpoints), true)?;
    let body = IntervalJson {
        source: g.id(s),
        target: g.id(t),
        related: summary.related,
        convention: summary.convention,
        size: summary.size,
        relations: summary.relations,
        midpoint: split.map(|m| MidpointJson {
            id: g.id(m.midpoint),
            n1: m.n1,
            n2: m.n2,
        }),
        members: summary.members.iter().map(|&v| g.id(v)).collect(),
    };
    let mut out = OutputDir::create(&args.out.out)?;
    out.write_json("interval.json", &body)?;
    out.finish("interval", args, loaded.digests)
}

pub fn dimension(args: &DimensionArgs) -> Result<()> {
    let method: Method = args.method.parse()?;
    let loaded = load(&args.input)?;
    let cfg = FieldConfig {
        method,
        num_pairs: args.num_pairs,
        min_interval_size: args.min_interval_size,
        seed: args.seed,
        convention: convention(args.include_endpoints),
    };
    let report = estimate_field_dimension(&loaded.graph, &cfg)?;
    let mut out = OutputDir::create(&args.out.out)?;
    out.write_json("dimension_report.json", &report)?;
    out.write("estimates.csv", |w| Ok(write_estimates_csv(&report, w)?))?;
    if let Some(s) = &report.summary {
        eprintln!(
            "{} estimates, median D = {:.4} (IQR {:.4})",
            report.estimates.len(),
            s.median,
            s.iqr
        );
    } else {
        eprintln!("no interval reached the minimum size; no estimates");
    }
    out.finish("dimension", args, loaded.digests)
}

pub fn sprinkle(args: &SprinkleArgs) -> Result<()> {
    let spec = SprinkleSpec {
        geometry: args.geometry.parse::<Geometry>()?,
        dimension: args.dim,
        n: args.n,
        seed: args.seed,
    };
    let g = chronocite::sprinkle(&spec)?;
    let mut out = OutputDir::create(&args.out.out)?;
    out.write("nodes.tsv", |w| Ok(tsv::write_nodes(&g, w)?))?;
    write_edge_tsv(&mut out, "edges.tsv", &g)?;
    out.finish("sprinkle", args, Vec::new())
}

#[derive(Serialize)]
struct RankRow<'a> {
    rank: usize,
    id: &'a str,
    count_before: usize,
    count_after: usize,
}

#[derive(Serialize)]
struct Ranking<'a> {
    top_k: usize,
    ranking: Vec<RankRow<'a>>,
}

pub fn rank(args: &RankArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let rows = post_tr_ranking(&loaded.graph, args.top_k);
    let ranking = Ranking {
        top_k: args.top_k,
        ranking: rows
            .iter()
            .enumerate()
            .map(|(i, r)| RankRow {
                rank: i + 1,
                id: &r.id,
                count_before: r.count_before,
                count_after: r.count_after,
            })
            .collect(),
    };
    let mut out = OutputDir::create(&args.out.out)?;
    out.write("ranking.csv", |w| {
        writeln!(w, "rank,id,count_before,count_after")?;
        for r in &ranking.ranking {
            writeln!(w, "{},{},{},{}", r.rank, r.id, r.count_before, r.count_after)?;
        }
        Ok(())
    })?;
    out.write_json("ranking.json", &ranking)?;
    out.finish("rank", args, loaded.digests)
}

#[derive(Deserialize)]
struct StoredReport {
    schema_version: u32,
    #[serde(flatten)]
    report: FieldDimensionReport,
}

pub fn export(args: &ExportArgs) -> Result<()> {
    let figure: Figure = args.figure.parse()?;
    let (name, needs_graph) = match figure {
        Figure::F3DegreeDist => ("f3_degree_dist.csv", true),
        Figure::F4Scatter => ("f4_scatter.csv", true),
        Figure::F5DimHist => ("f5_dim_hist.csv", false),
    };
    let mut inputs = Vec::new();
    let mut report = None;
    if let Some(path) = args.report.as_deref().filter(|_| !needs_graph) {
        require_file(path)?;
        inputs.push(digest_file(path)?);
        let stored: StoredReport =
            serde_json::from_reader(open(path)?).with_context(|| format!("parsing {}", path.display()))?;
        if stored.schema_version != crate::output::SCHEMA_VERSION {
            anyhow::bail!(
                "{}: unsupported schema_version {}",
                path.display(),
                stored.schema_version
            );
        }
        report = Some(stored.report);
    } else if !needs_graph {
        return Err(UsageError("--figure f5 needs --report dimension_report.json".into()).into());
    }
    let graph = match (&args.nodes, &args.edges) {
        (Some(nodes), Some(edges)) if needs_graph => {
            let loaded = load_paths(nodes, edges, args.keep_equal_time)?;
            inputs.extend(loaded.digests);
            Some(loaded.graph)
        }
        _ if needs_graph => {
            return Err(UsageError(format!("--figure {} needs --nodes and --edges", args.figure)).into())
        }
        _ => None,
    };
    let mut out = OutputDir::create(&args.out.out)?;
    out.write(name, |w| match (&graph, &report) {
        (Some(g), _) => Ok(export_figure_data(g, figure, None, w)?),
        (None, Some(r)) => Ok(write_estimates_csv(r, w)?),
        (None, None) => unreachable!("inputs checked above"),
    })?;
    out.finish("export", args, inputs)
}
