//! Times the neighbor-matching similarity on the AS surrogate with a few
//! nodes removed.
//!
//! `cargo run -p netheal --example similarity_bench --release [-- removed]`

use std::time::Instant;

use netheal::metrics::similarity::{graph_similarity, node_similarity};
use netheal::topology::as_surrogate;
use netheal::NodeId;

fn main() {
    let removed: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let original = as_surrogate();
    let mut current = original.clone();
    for i in 0..removed {
        current.kill_node(NodeId(100 + 37 * i)).unwrap();
    }
    let t = Instant::now();
    let (_, sweeps) = node_similarity(&original, &current);
    println!("node similarity: {sweeps} sweeps in {:.2?}", t.elapsed());
    if std::env::args().nth(2).as_deref() == Some("sweeps-only") {
        return;
    }
    let t = Instant::now();
    let s = graph_similarity(&original, &current).unwrap();
    println!("graph similarity {s:.6} in {:.2?}", t.elapsed());

    let cfg = netheal::engine::ExperimentConfig::default();
    let small = netheal::engine::build_graph(&cfg).unwrap();
    let mut cut = small.clone();
    cut.kill_node(NodeId(10)).unwrap();
    let t = Instant::now();
    let s = graph_similarity(&small, &cut).unwrap();
    println!(
        "100-node small world, one node removed: score {s:.6} in {:.2?}",
        t.elapsed()
    );
}
