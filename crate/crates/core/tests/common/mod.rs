//! Brute-force oracles shared by the integration suites. Everything here
//! works from plain adjacency lists and depth-first search, independent of
//! the bitset sweeps under test.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use chronocite::{build_graph, tsv, CitationGraph, IngestOptions, NodeIndex, TimedNode};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn load_fixture(stem: &str) -> CitationGraph {
    let nodes = tsv::read_nodes(BufReader::new(
        File::open(fixture(&format!("{stem}_nodes.tsv"))).unwrap(),
    ))
    .unwrap();
    let edges = tsv::read_edges(BufReader::new(
        File::open(fixture(&format!("{stem}_edges.tsv"))).unwrap(),
    ))
    .unwrap();
    build_graph(nodes, edges, IngestOptions::default()).unwrap().0
}

/// Graph on nodes `0..n` with time `i`, built through the public ingest path.
pub fn graph_from(n: usize, edges: &[(usize, usize)]) -> CitationGraph {
    let nodes = (0..n).map(|i| TimedNode {
        id: format!("v{i:04}"),
        time: i as f64,
    });
    let edges = edges.iter().map(|&(u, v)| (format!("v{u:04}"), format!("v{v:04}")));
    build_graph(nodes, edges, IngestOptions::default()).unwrap().0
}

pub fn edge_set(g: &CitationGraph) -> BTreeSet<(u32, u32)> {
    g.edges().map(|(u, v)| (u.0, v.0)).collect()
}

/// `reach[u][v]`: a non-empty path leads from `u` to `v`.
pub fn reach_matrix(g: &CitationGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s as u32];
            while let Some(x) = stack.pop() {
                for &y in g.out_neighbors(NodeIndex(x)) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect()
}

pub fn closure_pairs(g: &CitationGraph) -> BTreeSet<(u32, u32)> {
    let reach = reach_matrix(g);
    let mut pairs = BTreeSet::new();
    for (u, row) in reach.iter().enumerate() {
        for (v, &r) in row.iter().enumerate() {
            if r {
                pairs.insert((u as u32, v as u32));
            }
        }
    }
    pairs
}

/// Cubic reduction: drop `u -> v` iff `v` is reachable from another
/// out-neighbour of `u`.
pub fn naive_reduction(g: &CitationGraph) -> BTreeSet<(u32, u32)> {
    let reach = reach_matrix(g);
    g.edges()
        .filter(|&(u, v)| {
            !g.out_neighbors(u)
                .iter()
                .any(|&w| w != v.0 && reach[w as usize][v.index()])
        })
        .map(|(u, v)| (u.0, v.0))
        .collect()
}

pub fn brute_interval(reach: &[Vec<bool>], s: usize, t: usize) -> Vec<usize> {
    (0..reach.len()).filter(|&v| reach[s][v] && reach[v][t]).collect()
}

pub fn brute_relations(reach: &[Vec<bool>], members: &[usize]) -> u64 {
    let mut p = 0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if reach[a][b] || reach[b][a] {
                p += 1;
            }
        }
    }
    p
}

/// Exhaustive midpoint scan: `(member, N1, N2)` for the best member.
pub fn brute_midpoint(reach: &[Vec<bool>], members: &[usize]) -> (usize, usize, usize) {
    let mut best: Option<(usize, usize, usize)> = None;
    for &m in members {
        let n1 = members.iter().filter(|&&x| reach[x][m]).count();
        let n2 = members.iter().filter(|&&x| reach[m][x]).count();
        let better = match best {
            None => true,
            Some((bm, b1, b2)) => {
                let (cur, old) = (n1.min(n2), b1.min(b2));
                cur > old
                    || (cur == old
                        && (n1.abs_diff(n2) < b1.abs_diff(b2) || (n1.abs_diff(n2) == b1.abs_diff(b2) && m < bm)))
            }
        };
        if better {
            best = Some((m, n1, n2));
        }
    }
    best.expect("non-empty members")
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
