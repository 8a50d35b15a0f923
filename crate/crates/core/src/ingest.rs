//! Building a [`CitationGraph`] from raw node and edge lists.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, TimedNode};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Retain edges between nodes with identical timestamps, provided they
    /// do not form a cycle.
    pub keep_equal_time: bool,
}

/// Accounting of what happened to every input edge.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub edges_accepted: u64,
    pub edges_acausal_dropped: u64,
    pub edges_equal_time_dropped: u64,
    pub edges_duplicate_dropped: u64,
    pub self_loops_dropped: u64,
    pub edges_unknown_node_dropped: u64,
    pub acausal_fraction: f64,
}

impl IngestReport {
    pub fn total_edges(&self) -> u64 {
        self.edges_accepted
            + self.edges_acausal_dropped
            + self.edges_equal_time_dropped
            + self.edges_duplicate_dropped
            + self.self_loops_dropped
            + self.edges_unknown_node_dropped
    }
}

/// Builds the canonical DAG, dropping edges that point forward in time.
///
/// Nodes are re-indexed by ascending `(time, id)`, so the result does not
/// depend on the order of either input list.
pub fn build_graph<N, E, S>(nodes: N, edges: E, options: IngestOptions) -> Result<(CitationGraph, IngestReport)>
where
    N: IntoIterator<Item = TimedNode>,
    E: IntoIterator<Item = (S, S)>,
    S: AsRef<str>,
{
    let mut nodes: Vec<TimedNode> = nodes.into_iter().collect();
    if let Some(bad) = nodes.iter().find(|n| !n.time.is_finite()) {
        return Err(Error::NonFiniteTime { id: bad.id.clone() });
    }
    nodes.sort_by(|a, b| a.time.total_cmp(&b.time).then_with(|| a.id.cmp(&b.id)));
    if let Some(w) = nodes.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::DuplicateNode { id: w[0].id.clone() });
    }
    let mut position: HashMap<&str, u32> = HashMap::with_capacity(nodes.len());
    for (i, n) in nodes.iter().enumerate() {
        if position.insert(n.id.as_str(), i as u32).is_some() {
            return Err(Error::DuplicateNode { id: n.id.clone() });
        }
    }

    let mut report = IngestReport::default();
    let mut accepted: Vec<(u32, u32)> = Vec::new();
    let mut total = 0u64;
    for (citing, cited) in edges {
        total += 1;
        let (Some(&u), Some(&v)) = (position.get(citing.as_ref()), position.get(cited.as_ref())) else {
            report.edges_unknown_node_dropped += 1;
            continue;
        };
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        let (tu, tv) = (nodes[u as usize].time, nodes[v as usize].time);
        if tu < tv {
            report.edges_acausal_dropped += 1;
        } else if tu == tv && !options.keep_equal_time {
            report.edges_equal_time_dropped += 1;
        } else {
            accepted.push((u, v));
        }
    }
    drop(position);
    accepted.sort_unstable();
    let before = accepted.len();
    accepted.dedup();
    report.edges_duplicate_dropped = (before - accepted.len()) as u64;
    report.edges_accepted = accepted.len() as u64;
    report.acausal_fraction = if total == 0 {
        0.0
    } else {
        (report.edges_acausal_dropped + report.edges_equal_time_dropped) as f64 / total as f64
    };

    let has_ties = accepted
        .iter()
        .any(|&(u, v)| nodes[u as usize].time == nodes[v as usize].time);
    let (nodes, accepted) = if has_ties {
        order_equal_time_groups(nodes, accepted)?
    } else {
        (nodes, accepted)
    };

    let (ids, times): (Vec<String>, Vec<f64>) = nodes.into_iter().map(|n| (n.id, n.time)).unzip();
    let graph = CitationGraph::from_canonical(ids, times, accepted, options.keep_equal_time);
    Ok((graph, report))
}

type Reordered = (Vec<TimedNode>, Vec<(u32, u32)>);

/// Reorders each run of equal-time nodes so that retained edges between them
/// still descend in index order. Within a run, a node is placed as soon as
/// everything it cites has been placed, smallest id first.
fn order_equal_time_groups(nodes: Vec<TimedNode>, edges: Vec<(u32, u32)>) -> Result<Reordered> {
    let n = nodes.len();
    let mut cites_in_group: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut pending = vec![0usize; n];
    for &(u, v) in &edges {
        if nodes[u as usize].time == nodes[v as usize].time {
            cites_in_group[v as usize].push(u);
            pending[u as usize] += 1;
        }
    }

    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && nodes[end].time == nodes[start].time {
            end += 1;
        }
        let mut ready: BinaryHeap<Reverse<u32>> = (start..end)
            .filter(|&i| pending[i] == 0)
            .map(|i| Reverse(i as u32))
            .collect();
        let group_start = order.len();
        while let Some(Reverse(i)) = ready.pop() {
            order.push(i);
            for &citer in &cites_in_group[i as usize] {
                pending[citer as usize] -= 1;
                if pending[citer as usize] == 0 {
                    ready.push(Reverse(citer));
                }
            }
        }
        if order.len() - group_start != end - start {
            let stuck = (start..end).find(|&i| pending[i] > 0).unwrap_or(start);
            return Err(Error::EqualTimeCycle {
                id: nodes[stuck].id.clone(),
            });
        }
        start = end;
    }

    let mut remap = vec![0u32; n];
    for (new, &old) in order.iter().enumerate() {
        remap[old as usize] = new as u32;
    }
    let mut slots: Vec<Option<TimedNode>> = nodes.into_iter().map(Some).collect();
    let nodes = order
        .iter()
        .map(|&old| slots[old as usize].take().expect("each node placed once"))
        .collect();
    let edges = edges
        .into_iter()
        .map(|(u, v)| (remap[u as usize], remap[v as usize]))
        .collect();
    Ok((nodes, edges))
}
