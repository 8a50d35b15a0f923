//! The timestamped citation DAG.
//!
//! Nodes are stored under a canonical dense index: ascending `(time, id)`.
//! Because a citing paper is always newer than the paper it cites, every
//! edge runs from a higher index to a lower one, so the index order is a
//! (reversed) topological order. Adjacency is kept in CSR form in both
//! directions with each neighbour list sorted ascending.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense position of a node inside a [`CitationGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeIndex(pub u32);

impl NodeIndex {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A labelled node and its timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedNode {
    pub id: String,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Citations received.
    In,
    /// References made.
    Out,
}

#[derive(Debug, Clone, PartialEq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    /// `edges` must be sorted by `(row, col)` and free of duplicates.
    fn from_sorted(n: usize, edges: impl Iterator<Item = (u32, u32)>, len: usize) -> Self {
        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(len);
        for (row, col) in edges {
            offsets[row as usize + 1] += 1;
            targets.push(col);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    fn transpose(&self, n: usize) -> Csr {
        let mut offsets = vec![0usize; n + 1];
        for &t in &self.targets {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; self.targets.len()];
        // Rows are visited in ascending order, so each transposed row comes out sorted.
        for row in 0..n {
            for &col in self.row(row) {
                let slot = &mut fill[col as usize];
                targets[*slot] = row as u32;
                *slot += 1;
            }
        }
        Csr { offsets, targets }
    }
}

/// Immutable citation DAG with per-node timestamps.
#[derive(Debug, Clone)]
pub struct CitationGraph {
    ids: Vec<String>,
    times: Vec<f64>,
    lookup: HashMap<String, u32>,
    out: Csr,
    inc: Csr,
    equal_time_edges: bool,
}

impl PartialEq for CitationGraph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
            && self.times == other.times
            && self.out == other.out
            && self.equal_time_edges == other.equal_time_edges
    }
}

impl CitationGraph {
    /// Assembles a graph whose nodes are already in canonical order.
    ///
    /// Every edge `(u, v)` must satisfy `u > v`. Edges may arrive in any
    /// order; duplicates are collapsed.
    pub(crate) fn from_canonical(
        ids: Vec<String>,
        times: Vec<f64>,
        mut edges: Vec<(u32, u32)>,
        equal_time_edges: bool,
    ) -> Self {
        let n = ids.len();
        debug_assert_eq!(n, times.len());
        debug_assert!(edges.iter().all(|&(u, v)| u > v && (u as usize) < n));
        edges.sort_unstable();
        edges.dedup();
        let out = Csr::from_sorted(n, edges.iter().copied(), edges.len());
        drop(edges);
        let inc = out.transpose(n);
        let lookup = ids.iter().enumerate().map(|(i, id)| (id.clone(), i as u32)).collect();
        CitationGraph {
            ids,
            times,
            lookup,
            out,
            inc,
            equal_time_edges,
        }
    }

    /// A graph over the same nodes with a different edge set.
    pub(crate) fn with_edges(&self, edges: Vec<(u32, u32)>) -> Self {
        let n = self.node_count();
        let mut sorted = edges;
        sorted.sort_unstable();
        sorted.dedup();
        let out = Csr::from_sorted(n, sorted.iter().copied(), sorted.len());
        drop(sorted);
        let inc = out.transpose(n);
        CitationGraph {
            ids: self.ids.clone(),
            times: self.times.clone(),
            lookup: self.lookup.clone(),
            out,
            inc,
            equal_time_edges: self.equal_time_edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Whether equal-time edges were retained at ingest.
    pub fn has_equal_time_edges(&self) -> bool {
        self.equal_time_edges
    }

    pub fn id(&self, v: NodeIndex) -> &str {
        &self.ids[v.index()]
    }

    pub fn time(&self, v: NodeIndex) -> f64 {
        self.times[v.index()]
    }

    pub fn node(&self, v: NodeIndex) -> TimedNode {
        TimedNode {
            id: self.ids[v.index()].clone(),
            time: self.times[v.index()],
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeIndex> + '_ {
        (0..self.ids.len() as u32).map(NodeIndex)
    }

    pub fn index_of(&self, id: &str) -> Result<NodeIndex> {
        self.lookup
            .get(id)
            .map(|&i| NodeIndex(i))
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    /// Cited (older) nodes of `v`, ascending.
    #[inline]
    pub fn out_neighbors(&self, v: NodeIndex) -> &[u32] {
        self.out.row(v.index())
    }

    /// Citing (newer) nodes of `v`, ascending.
    #[inline]
    pub fn in_neighbors(&self, v: NodeIndex) -> &[u32] {
        self.inc.row(v.index())
    }

    pub fn has_edge(&self, u: NodeIndex, v: NodeIndex) -> bool {
        self.out_neighbors(u).binary_search(&v.0).is_ok()
    }

    /// All edges `(citing, cited)` in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeIndex, NodeIndex)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.out
                .row(u)
                .iter()
                .map(move |&v| (NodeIndex(u as u32), NodeIndex(v)))
        })
    }

    #[cfg(test)]
    pub(crate) fn raw_edges(&self) -> Vec<(u32, u32)> {
        self.edges().map(|(u, v)| (u.0, v.0)).collect()
    }

    /// Nodes ordered by decreasing time, ties broken by dense index.
    ///
    /// Every edge points from an earlier to a later position.
    pub fn topological_order(&self) -> Vec<NodeIndex> {
        (0..self.node_count() as u32).rev().map(NodeIndex).collect()
    }

    /// Nodes reachable from `v` along edge direction, ascending; `v` excluded.
    pub fn descendants(&self, v: NodeIndex) -> Vec<NodeIndex> {
        self.reach(v, |g, x| g.out_neighbors(x))
    }

    /// Nodes from which `v` is reachable, ascending; `v` excluded.
    pub fn ancestors(&self, v: NodeIndex) -> Vec<NodeIndex> {
        self.reach(v, |g, x| g.in_neighbors(x))
    }

    fn reach<'a, F>(&'a self, v: NodeIndex, next: F) -> Vec<NodeIndex>
    where
        F: Fn(&'a Self, NodeIndex) -> &'a [u32],
    {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![v.0];
        seen[v.index()] = true;
        let mut found = Vec::new();
        while let Some(x) = stack.pop() {
            for &y in next(self, NodeIndex(x)) {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    found.push(NodeIndex(y));
                    stack.push(y);
                }
            }
        }
        found.sort_unstable();
        found
    }

    /// Number of citations received by `v`.
    pub fn citation_count(&self, v: NodeIndex) -> usize {
        self.in_neighbors(v).len()
    }

    /// Histogram mapping degree to the number of nodes with that degree.
    pub fn degree_distribution(&self, direction: Direction) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for v in self.nodes() {
            let d = match direction {
                Direction::In => self.in_neighbors(v).len(),
                Direction::Out => self.out_neighbors(v).len(),
            };
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    /// Checks every structural invariant by full scan.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        if self.times.len() != n || self.out.offsets.len() != n + 1 {
            return Err(Error::Invariant("inconsistent array lengths".into()));
        }
        for i in 1..n {
            let a = (self.times[i - 1], &self.ids[i - 1]);
            let b = (self.times[i], &self.ids[i]);
            if a.0 > b.0 || (a.0 == b.0 && !self.equal_time_edges && a.1 >= b.1) {
                return Err(Error::Invariant(format!(
                    "nodes `{}` and `{}` are not in canonical order",
                    a.1, b.1
                )));
            }
        }
        for (u, v) in self.edges() {
            if u <= v {
                return Err(Error::Invariant(format!(
                    "edge {} -> {} does not descend in index order",
                    self.id(u),
                    self.id(v)
                )));
            }
            let (tu, tv) = (self.time(u), self.time(v));
            if tu < tv || (tu == tv && !self.equal_time_edges) {
                return Err(Error::Invariant(format!(
                    "edge {} -> {} is not time-respecting",
                    self.id(u),
                    self.id(v)
                )));
            }
        }
        for u in 0..n {
            let row = self.out.row(u);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invariant(format!(
                    "out-neighbours of `{}` not strictly ascending",
                    self.ids[u]
                )));
            }
        }
        if self.inc != self.out.transpose(n) {
            return Err(Error::Invariant("in-edges are not the transpose of out-edges".into()));
        }
        Ok(())
    }
}
