#![allow(dead_code)]

pub mod props;

use std::collections::BTreeSet;
use std::sync::Arc;

use netheal::engine::{ExperimentConfig, FailureWindow, SimilarityCadence, Simulation};
use netheal::node::Protocol;
use netheal::{Graph, NodeId};

/// Every connected labelled graph on `n` nodes.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
        .collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges).unwrap();
            g.is_connected().then_some(g)
        })
        .collect()
}

pub fn quiet_config(protocol: Protocol, rounds: u32) -> ExperimentConfig {
    ExperimentConfig {
        protocol,
        p_f: 0.0,
        reps: 1,
        window: FailureWindow::new(0, 0, rounds).unwrap(),
        similarity: SimilarityCadence::Never,
        ..Default::default()
    }
}

pub fn sim_on(graph: &Graph, cfg: &ExperimentConfig, seed: u64) -> Simulation {
    Simulation::new(cfg, Arc::new(graph.clone()), seed).unwrap()
}

/// Ids within `radius` hops of `src`.
pub fn ball(graph: &Graph, src: NodeId, radius: u32) -> BTreeSet<NodeId> {
    graph
        .bfs_distances(src)
        .into_iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d <= radius))
        .map(|(i, _)| NodeId(i as u32))
        .collect()
}

pub fn knows_everything(sim: &Simulation) -> bool {
    let full = netheal::messaging::TopologyKnowledge::from_graph(sim.original());
    sim.env()
        .live_node_agents()
        .all(|n| full.is_subset(n.knowledge()))
}
