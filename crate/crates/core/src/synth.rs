//! Random DAG generators for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::CitationGraph;

fn labels(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// Node `i` has time `i`; each pair `i > j` is an edge with probability
/// `density`.
pub fn random_dag(n: usize, density: f64, seed: u64) -> CitationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 1..n {
        for j in 0..i {
            if rng.random::<f64>() < density {
                edges.push((i as u32, j as u32));
            }
        }
    }
    CitationGraph::from_canonical(labels("r", n), (0..n).map(|i| i as f64).collect(), edges, false)
}

/// A growing citation network with preferential attachment: node `i`
/// cites `min(i, out_degree)` distinct older nodes, each chosen with
/// probability proportional to its citation count plus one.
pub fn price_dag(n: usize, out_degree: usize, seed: u64) -> CitationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Each node appears once for itself and once per citation received.
    let mut urn: Vec<u32> = Vec::with_capacity(n * (out_degree + 1));
    let mut edges = Vec::with_capacity(n * out_degree);
    let mut picked: Vec<u32> = Vec::with_capacity(out_degree);
    for i in 0..n as u32 {
        picked.clear();
        let want = out_degree.min(i as usize);
        while picked.len() < want {
            let v = urn[rng.random_range(0..urn.len())];
            if !picked.contains(&v) {
                picked.push(v);
            }
        }
        for &v in &picked {
            edges.push((i, v));
            urn.push(v);
        }
        urn.push(i);
    }
    CitationGraph::from_canonical(labels("n", n), (0..n).map(|i| i as f64).collect(), edges, false)
}
