//! Synthetic stand-in for the 512-router autonomous-systems snapshot.
//!
//! Used when the SNAP file is not available locally. The graph is grown by
//! preferential attachment with triad formation (Holme–Kim), with a mix of
//! single-link and multi-link arrivals so that about a fifth of the nodes
//! end up as degree-1 stubs, and the per-node link budget is trimmed so the
//! result has exactly [`AS_SURROGATE_NODES`] nodes and
//! [`AS_SURROGATE_EDGES`] edges.

use rand::seq::SliceRandom;
use rand::Rng;

use super::generators::preferential_targets;
use super::{Graph, NodeId};

pub const AS_SURROGATE_NODES: usize = 512;
pub const AS_SURROGATE_EDGES: usize = 1273;
/// Seed of the canonical surrogate shipped as `data/as_surrogate_512.txt`.
pub const AS_SURROGATE_SEED: u64 = 19981231;

const SEED_CLIQUE: usize = 4;
const MAX_LINKS: usize = 6;
/// Probability that a follow-up link closes a triangle with the previous one.
const TRIAD_PROB: f64 = 0.6;

/// The canonical surrogate graph.
pub fn as_surrogate() -> Graph {
    use rand::SeedableRng;
    generate_as_like(&mut rand_chacha::ChaCha8Rng::seed_from_u64(
        AS_SURROGATE_SEED,
    ))
}

pub fn generate_as_like<R: Rng + ?Sized>(rng: &mut R) -> Graph {
    let n = AS_SURROGATE_NODES;
    let mut links: Vec<usize> = (SEED_CLIQUE..n)
        .map(|_| match rng.gen::<f64>() {
            x if x < 0.45 => 1,
            x if x < 0.62 => 2,
            x if x < 0.80 => 3,
            x if x < 0.92 => 4,
            _ => 6,
        })
        .collect();
    let seed_edges = SEED_CLIQUE * (SEED_CLIQUE - 1) / 2;
    let target = AS_SURROGATE_EDGES - seed_edges;
    // Nudge random arrivals until the budget is met exactly.
    let mut total: usize = links.iter().sum();
    while total != target {
        let i = rng.gen_range(0..links.len());
        let cap = MAX_LINKS.min(SEED_CLIQUE + i);
        if total < target && links[i] < cap {
            links[i] += 1;
            total += 1;
        } else if total > target && links[i] > 1 {
            links[i] -= 1;
            total -= 1;
        }
    }

    let mut g = Graph::with_nodes(n);
    for a in 0..SEED_CLIQUE as u32 {
        for b in a + 1..SEED_CLIQUE as u32 {
            g.add_edge(NodeId(a), NodeId(b))
                .expect("seed nodes are live");
        }
    }
    let mut degrees = vec![0usize; n];
    for d in degrees.iter_mut().take(SEED_CLIQUE) {
        *d = SEED_CLIQUE - 1;
    }
    for (offset, &m) in links.iter().enumerate() {
        let v = SEED_CLIQUE + offset;
        let vid = NodeId(v as u32);
        let mut last: Option<usize> = None;
        let mut added = 0;
        while added < m {
            let triad: Option<usize> = last.and_then(|t| {
                if rng.gen::<f64>() >= TRIAD_PROB {
                    return None;
                }
                let options: Vec<usize> = g
                    .neighbors(NodeId(t as u32))
                    .iter()
                    .map(|x| x.index())
                    .filter(|x| *x != v && !g.has_edge(vid, NodeId(*x as u32)))
                    .collect();
                options.choose(rng).copied()
            });
            let target = match triad {
                Some(t) => t,
                None => {
                    let mut masked = degrees[..v].to_vec();
                    for x in g.neighbors(vid) {
                        masked[x.index()] = 0;
                    }
                    preferential_targets(&masked, 1, rng)[0]
                }
            };
            g.add_edge(vid, NodeId(target as u32))
                .expect("live endpoints");
            degrees[target] += 1;
            degrees[v] += 1;
            last = Some(target);
            added += 1;
        }
    }
    g
}
