//! Times the reduction of a preferential-attachment DAG.
//!
//! `cargo run --release -p chronocite --example scale -- [nodes] [chunk_size]`

use std::time::Instant;

use chronocite::synth::price_dag;
use chronocite::transitive::transitive_reduction_with;
use chronocite::SweepConfig;

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<usize>().expect("numeric argument"));
    let n = args.next().unwrap_or(1_000_000);
    let chunk_size = args.next().unwrap_or(chronocite::transitive::DEFAULT_CHUNK_SIZE);

    let t = Instant::now();
    let g = price_dag(n, 10, 1);
    eprintln!(
        "built {} nodes, {} edges in {:.2?}",
        g.node_count(),
        g.edge_count(),
        t.elapsed()
    );
    let t = Instant::now();
    let tr = transitive_reduction_with(
        &g,
        &SweepConfig {
            chunk_size,
            ..SweepConfig::default()
        },
    );
    eprintln!("reduced to {} edges in {:.2?}", tr.edge_count(), t.elapsed());
}
