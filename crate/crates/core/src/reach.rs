//! Striped bitset reachability sweep.
//!
//! Nodes are numbered so that every edge goes from a higher to a lower
//! index. For a column stripe `[start, end)` the sweep visits rows in
//! ascending order and builds, for each row `u`, the set of descendants of
//! `u` that fall inside the stripe. Only rows `>= start` can have such
//! descendants, so a stripe costs `(n - start) * ceil(width / 64)` words.
//!
//! While a row is assembled its in-stripe successors are visited from the
//! highest index down. A successor already covered by the partial row is
//! reachable through a longer path; it is reported as implied and its row is
//! not merged (it is a subset of what is already there). The remaining
//! successors are exactly the edges of the transitive reduction that end in
//! the stripe.

use crate::graph::{CitationGraph, NodeIndex};

/// Adjacency in a numbering where successors are strictly smaller than
/// their source and listed in ascending order.
pub(crate) trait Dag: Sync {
    fn len(&self) -> usize;
    fn successors(&self, u: usize) -> &[u32];
}

impl Dag for CitationGraph {
    fn len(&self) -> usize {
        self.node_count()
    }

    #[inline]
    fn successors(&self, u: usize) -> &[u32] {
        self.out_neighbors(NodeIndex(u as u32))
    }
}

/// A DAG induced on a subset of a [`CitationGraph`], renumbered `0..len`
/// in the order of the (ascending) subset.
#[derive(Debug, Clone)]
pub(crate) struct LocalDag {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl LocalDag {
    /// `nodes` must be sorted ascending and duplicate free.
    pub(crate) fn induced(g: &CitationGraph, nodes: &[u32]) -> Self {
        let mut local = vec![u32::MAX; g.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let lowest = nodes.first().copied().unwrap_or(0);
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &u in nodes {
            let succ = g.out_neighbors(NodeIndex(u));
            let from = succ.partition_point(|&w| w < lowest);
            targets.extend(
                succ[from..]
                    .iter()
                    .map(|&w| local[w as usize])
                    .filter(|&l| l != u32::MAX),
            );
            offsets.push(targets.len());
        }
        LocalDag { offsets, targets }
    }
}

impl Dag for LocalDag {
    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    fn successors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}

#[inline]
pub(crate) fn test_bit(words: &[u64], i: usize) -> bool {
    words[i >> 6] & (1u64 << (i & 63)) != 0
}

#[inline]
fn set_bit(words: &mut [u64], i: usize) {
    words[i >> 6] |= 1u64 << (i & 63);
}

#[inline]
fn or_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= *s;
    }
}

/// Iterates the set bit positions of `words`.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

/// Column ranges of width `chunk` covering `0..n`.
pub(crate) fn stripes(n: usize, chunk: usize) -> Vec<(usize, usize)> {
    let chunk = chunk.max(1);
    (0..n.div_ceil(chunk))
        .map(|s| (s * chunk, ((s + 1) * chunk).min(n)))
        .collect()
}

/// Sweeps one column stripe.
///
/// `visit(u, row, kept)` is called for each `u >= start` in ascending
/// order. `row` holds the descendants of `u` in the stripe (bit `i` is node
/// `start + i`); `kept` lists, highest first, the in-stripe successors of
/// `u` that are not implied by another successor.
pub(crate) fn sweep_stripe<D, F>(dag: &D, start: usize, end: usize, mut visit: F)
where
    D: Dag + ?Sized,
    F: FnMut(usize, &[u64], &[u32]),
{
    let n = dag.len();
    if start >= end || start >= n {
        return;
    }
    let words = (end - start).div_ceil(64);
    let mut bits = vec![0u64; (n - start) * words];
    let mut nonzero = vec![false; n - start];
    let mut kept: Vec<u32> = Vec::new();

    for u in start..n {
        let r = u - start;
        let succ = dag.successors(u);
        let lo = succ.partition_point(|&w| (w as usize) < start);
        let hi = lo + succ[lo..].partition_point(|&w| (w as usize) < end);
        let (before, rest) = bits.split_at_mut(r * words);
        let row = &mut rest[..words];
        let mut any = false;

        for &w in &succ[hi..] {
            let c = w as usize - start;
            if nonzero[c] {
                or_into(row, &before[c * words..(c + 1) * words]);
                any = true;
            }
        }

        kept.clear();
        for &w in succ[lo..hi].iter().rev() {
            let c = w as usize - start;
            if test_bit(row, c) {
                continue;
            }
            kept.push(w);
            if nonzero[c] {
                // Descendants of an in-stripe node lie strictly below it.
                let used = c.div_ceil(64);
                or_into(&mut row[..used], &before[c * words..c * words + used]);
            }
            set_bit(row, c);
            any = true;
        }

        nonzero[r] = any;
        visit(u, row, &kept);
    }
}
