//! Causal intervals, relation counting and midpoint search.
//!
//! The interval of a pair (source, target) is every node lying on a directed
//! path from the source to the target. By default the two endpoints are not
//! counted as members.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, NodeIndex};
use crate::reach::{ones, stripes, sweep_stripe, Dag, LocalDag};
use crate::transitive::DEFAULT_CHUNK_SIZE;

/// Whether the two endpoints count towards interval sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointConvention {
    #[default]
    Exclusive,
    Inclusive,
}

/// One interval: its members and the two counts the estimators consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSummary {
    pub source: NodeIndex,
    pub target: NodeIndex,
    /// Members strictly between the endpoints, ascending.
    pub members: Vec<NodeIndex>,
    /// Whether a path from source to target exists at all.
    pub related: bool,
    pub convention: EndpointConvention,
    /// Interval size N under `convention`.
    pub size: usize,
    /// Related (unordered) pairs P among the counted nodes.
    pub relations: u64,
}

/// A midpoint and the sizes of the two sub-intervals it induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MidpointSplit {
    pub midpoint: NodeIndex,
    /// Size of the interval (source, midpoint).
    pub n1: usize,
    /// Size of the interval (midpoint, target).
    pub n2: usize,
}

/// Nodes on a path from `source` to `target`, excluding both, ascending.
/// Also reports whether `target` is reachable from `source`.
pub fn interval_members(g: &CitationGraph, source: NodeIndex, target: NodeIndex) -> (Vec<NodeIndex>, bool) {
    if source <= target {
        return (Vec::new(), false);
    }
    let (s, t) = (source.0, target.0);
    let mut forward = vec![false; (s - t) as usize];
    let slot = |v: u32| (v - t - 1) as usize;
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        let succ = g.out_neighbors(NodeIndex(x));
        let from = succ.partition_point(|&w| w <= t);
        for &w in &succ[from..] {
            if !forward[slot(w)] {
                forward[slot(w)] = true;
                stack.push(w);
            }
        }
    }
    let mut members = Vec::new();
    let mut inside = vec![false; forward.len()];
    stack.push(t);
    while let Some(x) = stack.pop() {
        let pred = g.in_neighbors(NodeIndex(x));
        let until = pred.partition_point(|&w| w < s);
        for &w in &pred[..until] {
            if forward[slot(w)] && !inside[slot(w)] {
                inside[slot(w)] = true;
                members.push(NodeIndex(w));
                stack.push(w);
            }
        }
    }
    members.sort_unstable();
    let related = !members.is_empty() || g.has_edge(source, target);
    (members, related)
}

/// Descendant counts (within the set) of every node of a path-closed set,
/// plus ancestor counts when asked. `nodes` must be ascending.
struct ClosedSetCounts {
    descendants: Vec<u64>,
    ancestors: Option<Vec<u64>>,
}

fn closed_set_counts(g: &CitationGraph, nodes: &[u32], with_ancestors: bool) -> ClosedSetCounts {
    let dag = LocalDag::induced(g, nodes);
    let n = dag.len();
    let mut descendants = vec![0u64; n];
    let mut ancestors = with_ancestors.then(|| vec![0u64; n]);
    for (start, end) in stripes(n, DEFAULT_CHUNK_SIZE) {
        sweep_stripe(&dag, start, end, |u, row, _| {
            descendants[u] += row.iter().map(|w| u64::from(w.count_ones())).sum::<u64>();
            if let Some(anc) = ancestors.as_mut() {
                for c in ones(row) {
                    anc[start + c] += 1;
                }
            }
        });
    }
    ClosedSetCounts { descendants, ancestors }
}

/// Number of unordered pairs `(a, b)` of `members` with a directed path
/// from one to the other in `g`. Paths may leave the member set.
pub fn count_relations(g: &CitationGraph, members: &[NodeIndex]) -> u64 {
    let mut set: Vec<u32> = members.iter().map(|v| v.0).collect();
    set.sort_unstable();
    set.dedup();
    if set.len() < 2 {
        return 0;
    }
    let hull = path_hull(g, &set);
    let dag = LocalDag::induced(g, &hull);
    let is_member: Vec<bool> = {
        let mut flags = vec![false; hull.len()];
        let mut it = set.iter().peekable();
        for (i, &h) in hull.iter().enumerate() {
            if it.peek() == Some(&&h) {
                flags[i] = true;
                it.next();
            }
        }
        flags
    };
    let mut total = 0u64;
    for (start, end) in stripes(hull.len(), DEFAULT_CHUNK_SIZE) {
        let words = (end - start).div_ceil(64);
        let mut mask = vec![0u64; words];
        for c in (start..end).filter(|&c| is_member[c]) {
            mask[(c - start) >> 6] |= 1 << ((c - start) & 63);
        }
        sweep_stripe(&dag, start, end, |u, row, _| {
            if is_member[u] {
                total += row
                    .iter()
                    .zip(&mask)
                    .map(|(r, m)| u64::from((r & m).count_ones()))
                    .sum::<u64>();
            }
        });
    }
    total
}

/// Every node lying on a path between two nodes of `set` (plus `set`),
/// ascending.
fn path_hull(g: &CitationGraph, set: &[u32]) -> Vec<u32> {
    let n = g.node_count();
    let (lo, hi) = (set[0], set[set.len() - 1]);
    let mut down = vec![false; n];
    let mut stack: Vec<u32> = set.to_vec();
    for &v in set {
        down[v as usize] = true;
    }
    while let Some(x) = stack.pop() {
        let succ = g.out_neighbors(NodeIndex(x));
        for &w in &succ[succ.partition_point(|&w| w < lo)..] {
            if !down[w as usize] {
                down[w as usize] = true;
                stack.push(w);
            }
        }
    }
    let mut up = vec![false; n];
    stack.extend_from_slice(set);
    for &v in set {
        up[v as usize] = true;
    }
    while let Some(x) = stack.pop() {
        let pred = g.in_neighbors(NodeIndex(x));
        for &w in &pred[..pred.partition_point(|&w| w <= hi)] {
            if !up[w as usize] {
                up[w as usize] = true;
                stack.push(w);
            }
        }
    }
    (lo..=hi).filter(|&v| down[v as usize] && up[v as usize]).collect()
}

fn endpoint_checks(g: &CitationGraph, source: NodeIndex, target: NodeIndex) -> Result<()> {
    for v in [source, target] {
        if v.index() >= g.node_count() {
            return Err(Error::UnknownNode(v.to_string()));
        }
    }
    if source == target {
        return Err(Error::SameEndpoints(g.id(source).to_string()));
    }
    Ok(())
}

/// Members, size N and relation count P for the pair.
///
/// Under the inclusive convention both endpoints are added to the size
/// (when a path exists) and the `2N + 1` relations they take part in are
/// added to P.
pub fn interval(
    g: &CitationGraph,
    source: NodeIndex,
    target: NodeIndex,
    convention: EndpointConvention,
) -> Result<IntervalSummary> {
    interval_with_split(g, source, target, convention, false).map(|(summary, _)| summary)
}

/// The member maximizing `min(N1, N2)`; ties prefer the smaller
/// `|N1 - N2|`, then the lower node index.
pub fn find_midpoint(
    g: &CitationGraph,
    source: NodeIndex,
    target: NodeIndex,
    convention: EndpointConvention,
) -> Result<MidpointSplit> {
    let (_, split) = interval_with_split(g, source, target, convention, true)?;
    split.ok_or_else(|| Error::EmptyInterval {
        from: g.id(source).to_string(),
        to: g.id(target).to_string(),
    })
}

/// Interval summary and, when non-empty, the midpoint split, from one
/// membership search.
pub fn interval_with_split(
    g: &CitationGraph,
    source: NodeIndex,
    target: NodeIndex,
    convention: EndpointConvention,
    want_split: bool,
) -> Result<(IntervalSummary, Option<MidpointSplit>)> {
    endpoint_checks(g, source, target)?;
    let (members, related) = interval_members(g, source, target);
    let raw: Vec<u32> = members.iter().map(|v| v.0).collect();
    let counts = closed_set_counts(g, &raw, want_split && !raw.is_empty());
    let inner: u64 = counts.descendants.iter().sum();
    let n = members.len();
    let extra = match convention {
        EndpointConvention::Inclusive if related => 2,
        _ => 0,
    };
    let relations = if extra == 2 { inner + 2 * n as u64 + 1 } else { inner };
    let split = counts.ancestors.map(|ancestors| {
        let best = (0..n)
            .min_by_key(|&i| {
                let (n1, n2) = (ancestors[i], counts.descendants[i]);
                (std::cmp::Reverse(n1.min(n2)), n1.abs_diff(n2), i)
            })
            .expect("non-empty");
        MidpointSplit {
            midpoint: members[best],
            n1: ancestors[best] as usize + extra,
            n2: counts.descendants[best] as usize + extra,
        }
    });
    Ok((
        IntervalSummary {
            source,
            target,
            members,
            related,
            convention,
            size: n + extra,
            relations,
        },
        split,
    ))
}
