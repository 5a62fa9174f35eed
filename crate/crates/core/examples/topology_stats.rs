//! Prints vertex/edge counts, degree and clustering statistics for every
//! built-in topology.
//!
//! `cargo run -p netheal --example topology_stats --release [-- <edge-list>]`

use netheal::topology::{
    generate, generate_as_like, load_edge_list, GeneratorKind, GeneratorParams,
};
use netheal::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn clustering(g: &Graph) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for u in g.live_nodes() {
        count += 1;
        let nb: Vec<_> = g.neighbors(u).iter().copied().collect();
        if nb.len() < 2 {
            continue;
        }
        let mut links = 0usize;
        for (i, a) in nb.iter().enumerate() {
            for b in &nb[i + 1..] {
                if g.has_edge(*a, *b) {
                    links += 1;
                }
            }
        }
        sum += 2.0 * links as f64 / (nb.len() * (nb.len() - 1)) as f64;
    }
    sum / count as f64
}

fn report(name: &str, g: &Graph) {
    let n = g.live_count();
    let leaves = g.live_nodes().filter(|id| g.degree(*id) == 1).count();
    let max_deg = g.live_nodes().map(|id| g.degree(id)).max().unwrap_or(0);
    println!(
        "{name:<18} vertices={n:<4} edges={:<5} avg_degree={:.3} max_degree={max_deg:<4} degree1={leaves:<4} clustering={:.4} diameter={:?}",
        g.edge_count(),
        2.0 * g.edge_count() as f64 / n as f64,
        clustering(g),
        g.diameter()
    );
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for kind in [
        GeneratorKind::SmallWorld,
        GeneratorKind::Community,
        GeneratorKind::ScaleFree,
        GeneratorKind::HubSpoke,
        GeneratorKind::ForestHubSpoke,
    ] {
        let g = generate(&GeneratorParams::of_kind(kind), &mut rng).expect("generator");
        report(&format!("{kind:?}"), &g);
    }
    let surrogate = generate_as_like(&mut ChaCha8Rng::seed_from_u64(19981231));
    report("AsSurrogate", &surrogate);
    if let Some(path) = std::env::args().nth(1) {
        let loaded = load_edge_list(&path).expect("edge list");
        report(&path, &loaded.graph);
    }
}
