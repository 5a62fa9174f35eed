//! Synthetic topology generators.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{load_edge_list, Graph, NodeId};
use crate::error::{Error, Result};

/// Maximum number of full regenerations when a rewired lattice comes out
/// disconnected.
const MAX_REGENERATIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    SmallWorld,
    Community,
    ScaleFree,
    HubSpoke,
    ForestHubSpoke,
    /// The bundled synthetic AS-like graph; ignores every other field.
    AsSurrogate,
    EdgeList,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.replace('-', "_").as_str() {
            "small_world" => GeneratorKind::SmallWorld,
            "community" => GeneratorKind::Community,
            "scale_free" => GeneratorKind::ScaleFree,
            "hub_spoke" => GeneratorKind::HubSpoke,
            "forest_hub_spoke" => GeneratorKind::ForestHubSpoke,
            "as_surrogate" => GeneratorKind::AsSurrogate,
            "edge_list" => GeneratorKind::EdgeList,
            other => {
                return Err(Error::InvalidParams(format!(
                    "unknown topology kind `{other}`"
                )))
            }
        })
    }
}

/// Parameters for every generator kind; each kind reads the fields it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorParams {
    pub kind: GeneratorKind,
    /// Node count.
    pub n: usize,
    /// Lattice degree for small-world and community clusters.
    pub k: usize,
    /// Rewiring probability.
    pub beta: f64,
    pub n_clusters: usize,
    /// Seed nodes for preferential attachment.
    pub sn: usize,
    /// Links per attached node.
    pub eta: usize,
    pub path: Option<PathBuf>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            kind: GeneratorKind::SmallWorld,
            n: 100,
            k: 4,
            beta: 0.45,
            n_clusters: 4,
            sn: 9,
            eta: 1,
            path: None,
        }
    }
}

impl GeneratorParams {
    pub fn of_kind(kind: GeneratorKind) -> Self {
        GeneratorParams {
            kind,
            ..Default::default()
        }
    }

    pub fn edge_list(path: impl Into<PathBuf>) -> Self {
        GeneratorParams {
            kind: GeneratorKind::EdgeList,
            path: Some(path.into()),
            ..Default::default()
        }
    }
}

/// Dispatches on `params.kind`.
pub fn generate<R: Rng + ?Sized>(params: &GeneratorParams, rng: &mut R) -> Result<Graph> {
    match params.kind {
        GeneratorKind::SmallWorld => generate_small_world(params.n, params.k, params.beta, rng),
        GeneratorKind::Community => {
            generate_community(params.n, params.n_clusters, params.k, params.beta, rng)
        }
        GeneratorKind::ScaleFree => generate_scale_free(params.n, params.sn, params.eta, rng),
        GeneratorKind::HubSpoke => generate_hub_spoke(params.n),
        GeneratorKind::ForestHubSpoke => generate_forest_hub_spoke(params.n, params.n_clusters),
        GeneratorKind::AsSurrogate => Ok(super::as_surrogate()),
        GeneratorKind::EdgeList => {
            let path = params
                .path
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("edge_list needs a path".into()))?;
            Ok(load_edge_list(path)?.graph)
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

/// Watts–Strogatz small world: ring lattice of degree `k`, then each lattice
/// edge `(u, u+j)` has its far endpoint rewired with probability `beta` to a
/// uniform node that is neither `u` nor already adjacent to it. Disconnected
/// results are regenerated.
pub fn generate_small_world<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    beta: f64,
    rng: &mut R,
) -> Result<Graph> {
    if k % 2 != 0 || k < 2 || k >= n {
        return Err(invalid(format!(
            "small world needs even k with 2 <= k < n (k={k}, n={n})"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("beta must lie in [0,1], got {beta}")));
    }
    for _ in 0..MAX_REGENERATIONS {
        let g = watts_strogatz_once(n, k, beta, rng);
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Disconnected(MAX_REGENERATIONS))
}

fn watts_strogatz_once<R: Rng + ?Sized>(n: usize, k: usize, beta: f64, rng: &mut R) -> Graph {
    let mut g = Graph::with_nodes(n);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            g.add_edge(NodeId(u as u32), NodeId(v as u32))
                .expect("lattice endpoints are live");
        }
    }
    let mut candidates = Vec::with_capacity(n);
    for j in 1..=k / 2 {
        for u in 0..n {
            let a = NodeId(u as u32);
            let b = NodeId(((u + j) % n) as u32);
            if rng.gen::<f64>() >= beta || !g.has_edge(a, b) {
                continue;
            }
            candidates.clear();
            candidates.extend(g.ids().filter(|w| *w != a && !g.has_edge(a, *w)));
            if let Some(&w) = candidates.choose(rng) {
                g.remove_edge(a, b);
                g.add_edge(a, w).expect("rewire target is live");
            }
        }
    }
    g
}

/// Splits `n` into `parts` contiguous blocks; the remainder goes to the last.
fn block_sizes(n: usize, parts: usize) -> Vec<usize> {
    let base = n / parts;
    let mut sizes = vec![base; parts];
    if let Some(last) = sizes.last_mut() {
        *last += n - base * parts;
    }
    sizes
}

/// `n_clusters` small-world clusters joined in a ring: for each cluster `i`
/// one edge between a uniform node of cluster `i` and a uniform node of
/// cluster `(i + 1) mod n_clusters`.
pub fn generate_community<R: Rng + ?Sized>(
    n: usize,
    n_clusters: usize,
    k: usize,
    beta: f64,
    rng: &mut R,
) -> Result<Graph> {
    if n_clusters == 0 || n < n_clusters {
        return Err(invalid(format!(
            "community needs 1 <= n_clusters <= n (n={n}, n_clusters={n_clusters})"
        )));
    }
    let sizes = block_sizes(n, n_clusters);
    let mut g = Graph::with_nodes(n);
    let mut ranges = Vec::with_capacity(n_clusters);
    let mut offset = 0u32;
    for &size in &sizes {
        let cluster = generate_small_world(size, k, beta, rng)?;
        for (a, b) in cluster.edges() {
            g.add_edge(NodeId(a.0 + offset), NodeId(b.0 + offset))?;
        }
        ranges.push(offset..offset + size as u32);
        offset += size as u32;
    }
    if n_clusters >= 2 {
        for i in 0..n_clusters {
            let next = (i + 1) % n_clusters;
            // Two clusters form a 2-ring; re-draw if the pair already exists.
            loop {
                let a = NodeId(rng.gen_range(ranges[i].clone()));
                let b = NodeId(rng.gen_range(ranges[next].clone()));
                if g.add_edge(a, b)? {
                    break;
                }
            }
        }
    }
    Ok(g)
}

/// Draws `eta` distinct indices with probability proportional to `degrees`,
/// without replacement.
pub(crate) fn preferential_targets<R: Rng + ?Sized>(
    degrees: &[usize],
    eta: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(eta);
    let mut total: usize = degrees.iter().sum();
    while chosen.len() < eta && total > 0 {
        let mut ticket = rng.gen_range(0..total);
        for (i, &d) in degrees.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            if ticket < d {
                chosen.push(i);
                total -= d;
                break;
            }
            ticket -= d;
        }
    }
    chosen
}

/// Preferential attachment. The `sn` seed nodes form a complete graph; every
/// later node links to `eta` distinct existing nodes chosen with probability
/// `k_i / sum_j k_j`.
pub fn generate_scale_free<R: Rng + ?Sized>(
    n: usize,
    sn: usize,
    eta: usize,
    rng: &mut R,
) -> Result<Graph> {
    if eta < 1 || sn < eta || sn < 2 || n <= sn {
        return Err(invalid(format!(
            "scale free needs 2 <= sn, 1 <= eta <= sn, n > sn (n={n}, sn={sn}, eta={eta})"
        )));
    }
    let mut g = Graph::with_nodes(n);
    for a in 0..sn as u32 {
        for b in a + 1..sn as u32 {
            g.add_edge(NodeId(a), NodeId(b))?;
        }
    }
    let mut degrees: Vec<usize> = (0..n).map(|i| g.degree(NodeId(i as u32))).collect();
    for v in sn..n {
        for t in preferential_targets(&degrees[..v], eta, rng) {
            g.add_edge(NodeId(v as u32), NodeId(t as u32))?;
            degrees[t] += 1;
            degrees[v] += 1;
        }
    }
    Ok(g)
}

/// Star: node 0 is the hub, every other node a leaf.
pub fn generate_hub_spoke(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(invalid(format!("hub & spoke needs n >= 2, got {n}")));
    }
    Graph::from_edges(n, (1..n as u32).map(|leaf| (0, leaf)))
}

/// `n_clusters` stars joined in a ring through their leaves: the last leaf of
/// star `i` links to the first leaf of star `(i + 1) mod n_clusters`.
pub fn generate_forest_hub_spoke(n: usize, n_clusters: usize) -> Result<Graph> {
    if n_clusters == 0 {
        return Err(invalid("forest hub & spoke needs n_clusters >= 1"));
    }
    let sizes = block_sizes(n, n_clusters);
    let min_size = if n_clusters == 1 { 2 } else { 3 };
    if sizes.iter().any(|s| *s < min_size) {
        return Err(invalid(format!(
            "forest hub & spoke needs at least {min_size} nodes per star (n={n}, n_clusters={n_clusters})"
        )));
    }
    let mut g = Graph::with_nodes(n);
    let mut stars = Vec::with_capacity(n_clusters);
    let mut offset = 0u32;
    for &size in &sizes {
        let center = offset;
        for leaf in center + 1..center + size as u32 {
            g.add_edge(NodeId(center), NodeId(leaf))?;
        }
        // (first leaf, last leaf)
        stars.push((center + 1, center + size as u32 - 1));
        offset += size as u32;
    }
    if n_clusters >= 2 {
        for i in 0..n_clusters {
            let next = (i + 1) % n_clusters;
            g.add_edge(NodeId(stars[i].1), NodeId(stars[next].0))?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn small_world_without_rewiring_is_the_lattice() {
        let g = generate_small_world(10, 2, 0.0, &mut rng(1)).unwrap();
        let cycle = Graph::from_edges(10, (0..10u32).map(|i| (i, (i + 1) % 10))).unwrap();
        assert_eq!(g, cycle);
    }

    #[test]
    fn small_world_keeps_edge_count_and_connectivity() {
        let g = generate_small_world(20, 4, 1.0, &mut rng(42)).unwrap();
        assert_eq!(g.edge_count(), 40);
        assert!(g.is_connected());
        assert!(g.is_consistent());
    }

    #[test]
    fn small_world_rejects_bad_params() {
        assert!(generate_small_world(10, 3, 0.1, &mut rng(0)).is_err());
        assert!(generate_small_world(4, 4, 0.1, &mut rng(0)).is_err());
        assert!(generate_small_world(10, 4, 1.5, &mut rng(0)).is_err());
    }

    #[test]
    fn single_cluster_community_degenerates_to_small_world() {
        let g = generate_community(8, 1, 2, 0.0, &mut rng(3)).unwrap();
        let cycle = Graph::from_edges(8, (0..8u32).map(|i| (i, (i + 1) % 8))).unwrap();
        assert_eq!(g, cycle);
    }

    #[test]
    fn community_adds_one_ring_edge_per_cluster() {
        let g = generate_community(40, 4, 4, 0.1, &mut rng(7)).unwrap();
        let cluster = |id: NodeId| id.0 / 10;
        let inter = g
            .edges()
            .filter(|(a, b)| cluster(*a) != cluster(*b))
            .count();
        assert_eq!(inter, 4);
        for c in 0..4u32 {
            let mut sub = g.clone();
            for id in g.ids().filter(|id| cluster(*id) != c) {
                sub.kill_node(id).unwrap();
            }
            assert!(sub.is_connected(), "cluster {c} not internally connected");
        }
    }

    #[test]
    fn two_cluster_ring_has_two_distinct_links() {
        for seed in 0..20 {
            let g = generate_community(12, 2, 2, 0.0, &mut rng(seed)).unwrap();
            assert_eq!(g.edge_count(), 12 + 2);
        }
    }

    #[test]
    fn scale_free_single_attachment() {
        let g = generate_scale_free(4, 3, 1, &mut rng(5)).unwrap();
        assert_eq!(g.degree(NodeId(3)), 1);
        assert!(g.neighbors(NodeId(3)).iter().all(|t| t.0 < 3));
    }

    #[test]
    fn scale_free_edge_count() {
        let g = generate_scale_free(100, 9, 1, &mut rng(11)).unwrap();
        assert_eq!(g.edge_count(), 36 + 91);
        assert!(g.is_connected());
    }

    #[test]
    fn preferential_targets_are_distinct() {
        let degrees = [1, 5, 2, 2, 7];
        for seed in 0..50 {
            let mut t = preferential_targets(&degrees, 3, &mut rng(seed));
            t.sort_unstable();
            t.dedup();
            assert_eq!(t.len(), 3);
        }
    }

    #[test]
    fn hub_spoke_shapes() {
        let g = generate_hub_spoke(2).unwrap();
        assert_eq!(g.edge_set(), [(NodeId(0), NodeId(1))].into());
        let g = generate_hub_spoke(100).unwrap();
        assert_eq!(g.edge_count(), 99);
        assert_eq!(g.diameter(), Some(2));
        assert!(generate_hub_spoke(1).is_err());
    }

    #[test]
    fn forest_hub_spoke_shapes() {
        let g = generate_forest_hub_spoke(100, 4).unwrap();
        assert_eq!(g.edge_count(), 100);
        assert_eq!(g.diameter(), Some(8));
        let star = generate_forest_hub_spoke(5, 1).unwrap();
        assert_eq!(star, generate_hub_spoke(5).unwrap());
        assert!(generate_forest_hub_spoke(4, 2).is_err());
    }
}
