//! Property checks shared by the test suites and the acceptance report.
//! Each check panics with a description of the first counterexample.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use netheal::engine::{
    run_experiment, ExperimentConfig, FailureWindow, SimilarityCadence, Simulation,
};
use netheal::healing::HealingAction;
use netheal::messaging::TopologyKnowledge;
use netheal::metrics::graph_similarity;
use netheal::node::trickle::I_MAX_CAP;
use netheal::node::{Protocol, TrickleState};
use netheal::topology::generate_small_world;
use netheal::{Graph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{connected_graphs, knows_everything, quiet_config, sim_on};

pub fn random_connected(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=9);
    loop {
        let p = rng.gen_range(0.2..0.8);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::from_edges(n as usize, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Structural invariants that must hold at every barrier.
pub fn check_round_invariants(sim: &Simulation) {
    let env = sim.env();
    let g = env.graph();
    assert!(g.is_consistent());
    assert!(
        g.edges().all(|(a, b)| sim.original().has_edge(a, b)),
        "edge outside the original"
    );
    let mut seen = BTreeSet::new();
    for node in env.live_node_agents() {
        assert!(g.is_alive(node.id()));
        assert!(
            seen.insert(node.id()),
            "two live nodes share id {}",
            node.id()
        );
    }
    assert_eq!(seen.len(), g.live_count());
    assert!(env.agents().iter().all(|a| g.is_alive(a.location)));
    let mut created = BTreeMap::new();
    for action in sim.last_healing() {
        if let HealingAction::Created(d) = action {
            *created.entry(d.missing).or_insert(0) += 1;
            assert!(g.is_alive(d.creator) && d.neighbor_set.contains(&d.creator));
        }
    }
    assert!(
        created.values().all(|&c| c == 1),
        "duplicate replicas {created:?}"
    );
}

/// Random small graphs, protocols and failure windows; returns the number
/// of rounds checked.
pub fn replica_uniqueness(scenarios: u64, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounds = 0;
    for scenario in 0..scenarios {
        let g = random_connected(&mut rng);
        let protocol = Protocol::ALL[rng.gen_range(0..3)];
        let start = rng.gen_range(0..6);
        let cfg = ExperimentConfig {
            protocol,
            p_f: rng.gen_range(0.05..0.6),
            reps: 1,
            window: FailureWindow::new(start, start + rng.gen_range(1..6), start + 12).unwrap(),
            similarity: SimilarityCadence::Never,
            ..Default::default()
        };
        let mut sim = Simulation::new(&cfg, Arc::new(g), scenario).unwrap();
        while !sim.is_finished() {
            sim.step().unwrap();
            check_round_invariants(&sim);
            rounds += 1;
        }
    }
    rounds
}

/// Kills `victims` after `warmup` quiet rounds; returns the number of rounds
/// until the original graph is back, if within `extra`.
pub fn rounds_to_repair(
    g: &Graph,
    protocol: Protocol,
    victims: &[NodeId],
    warmup: u32,
    extra: u32,
) -> Option<u32> {
    let mut sim = sim_on(g, &quiet_config(protocol, warmup + extra), 1);
    for _ in 0..warmup {
        sim.step().unwrap();
    }
    if protocol != Protocol::AllInfo {
        assert!(knows_everything(&sim), "warmup too short");
    }
    for &v in victims {
        sim.env_mut().kill(v).unwrap();
    }
    for k in 1..=extra {
        sim.step().unwrap();
        check_round_invariants(&sim);
        if sim.is_recovered() {
            return Some(k);
        }
    }
    None
}

/// Every connected graph with at most five nodes, every single victim
/// (repaired within 2 rounds) and every victim pair (within 3), with
/// complete knowledge from all-info and from converged Trickle. Returns the
/// number of cases.
pub fn exhaustive_small_repair() -> usize {
    let mut cases = 0;
    for protocol in [Protocol::AllInfo, Protocol::Trickle] {
        let warmup = if protocol == Protocol::AllInfo { 0 } else { 30 };
        for n in 2..=5 {
            for g in connected_graphs(n) {
                let ids: Vec<NodeId> = g.ids().collect();
                for (i, &a) in ids.iter().enumerate() {
                    let took = rounds_to_repair(&g, protocol, &[a], warmup, 2);
                    assert!(took.is_some(), "{protocol}: {a} lost in {:?}", g.edge_set());
                    cases += 1;
                    if n < 3 {
                        continue;
                    }
                    for &b in &ids[i + 1..] {
                        let took = rounds_to_repair(&g, protocol, &[a, b], warmup, 3);
                        assert!(
                            took.is_some(),
                            "{protocol}: {a},{b} lost in {:?}",
                            g.edge_set()
                        );
                        cases += 1;
                    }
                }
            }
        }
    }
    cases
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// All ordered pairs of 4-node graphs: score is exactly 1 iff the graphs are
/// isomorphic, and for equal ids iff the edge sets are equal. Returns the
/// number of pairs.
pub fn four_node_similarity_oracle() -> usize {
    let pairs: Vec<(u32, u32)> = (0..4)
        .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
        .collect();
    let graphs: Vec<Graph> = (0u32..64)
        .map(|m| {
            Graph::from_edges(
                4,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
            .unwrap()
        })
        .collect();
    let perms = permutations(4);
    let relabel = |g: &Graph, p: &[u32]| -> BTreeSet<(NodeId, NodeId)> {
        g.edges()
            .map(|(a, b)| {
                let (x, y) = (NodeId(p[a.index()]), NodeId(p[b.index()]));
                (x.min(y), x.max(y))
            })
            .collect()
    };
    let mut checked = 0;
    for a in &graphs {
        for b in &graphs {
            let iso = perms.iter().any(|p| relabel(a, p) == b.edge_set());
            let s = graph_similarity(a, b).unwrap();
            assert!((0.0..=1.0).contains(&s));
            assert_eq!(
                s == 1.0,
                iso,
                "{:?} vs {:?}: {s}",
                a.edge_set(),
                b.edge_set()
            );
            if a.edge_set() == b.edge_set() {
                assert_eq!(s, 1.0);
            }
            checked += 1;
        }
    }
    checked
}

/// Random event sequences against the Trickle timer: suppression at k,
/// collapse to 1 on inconsistency, doubling up to the cap otherwise.
pub fn trickle_state_machine(sequences: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..sequences {
        let k = rng.gen_range(1..5);
        let mut s = TrickleState::new(k, &mut rng);
        let mut last_interval = s.current_interval;
        for round in 0..400u32 {
            if rng.gen_bool(0.05) {
                s.on_inconsistent(&mut rng);
                assert_eq!(
                    (s.current_interval, s.i_min, s.i_max, s.counter),
                    (1, 1, 1, 0)
                );
                last_interval = 1;
            }
            for _ in 0..rng.gen_range(0..3) {
                s.on_consistent();
            }
            if s.counter >= s.k {
                assert!(!s.should_transmit(round));
            }
            assert!(s.t >= 1 && s.t <= s.current_interval.max(1));
            let before = s.current_interval;
            if s.on_round_end(round, &mut rng) {
                assert_eq!(s.current_interval, (2 * before).min(I_MAX_CAP));
                assert_eq!(
                    (s.i_min, s.i_max, s.counter),
                    (s.current_interval / 2, s.current_interval, 0)
                );
            } else {
                assert_eq!(s.current_interval, before);
            }
            assert!(s.current_interval >= last_interval && s.current_interval <= I_MAX_CAP);
            last_interval = s.current_interval;
        }
    }

    // a lone node only ever sees expiries: 2, 4, 8, ... up to the cap
    let lone = Graph::with_nodes(1);
    let mut sim = sim_on(&lone, &quiet_config(Protocol::Trickle, 70_000), 0);
    let mut seen = vec![2u32];
    while !sim.is_finished() {
        sim.step().unwrap();
        let ci = sim
            .env()
            .node(NodeId(0))
            .unwrap()
            .trickle
            .as_ref()
            .unwrap()
            .current_interval;
        if ci != *seen.last().unwrap() {
            assert_eq!(ci, seen.last().unwrap() * 2);
            seen.push(ci);
        }
    }
    assert_eq!(*seen.last().unwrap(), I_MAX_CAP);
}

/// One failure scenario on a small-world graph: queued bytes are conserved
/// and every node's knowledge only grows while it stays alive.
pub fn conservation_and_monotonicity(seed: u64, protocol: Protocol, p_f: f64, start: u32) {
    let mut grng = ChaCha8Rng::seed_from_u64(seed);
    let graph = generate_small_world(24, 4, 0.3, &mut grng).unwrap();
    let cfg = ExperimentConfig {
        protocol,
        p_f,
        reps: 1,
        window: FailureWindow::new(start, start + 8, start + 24).unwrap(),
        similarity: SimilarityCadence::Never,
        ..Default::default()
    };
    let mut sim = Simulation::new(&cfg, Arc::new(graph), seed).unwrap();
    let mut prev: BTreeMap<NodeId, TopologyKnowledge> = BTreeMap::new();
    let mut received = 0u64;
    while !sim.is_finished() {
        let rec = sim.step().unwrap();
        let t = sim.last_traffic();
        assert_eq!(rec.received_bytes, t.received_bytes);
        assert_eq!(rec.received_messages, t.received_messages);
        assert!(t.pings + t.heartbeats <= t.received_messages);
        received += t.received_bytes;

        let q = sim.env().queue_totals();
        let pending: u64 = sim
            .env()
            .graph()
            .ids()
            .filter_map(|id| sim.env().mailbox(id))
            .map(|m| m.pending_bytes())
            .sum();
        assert_eq!(
            q.queued_bytes,
            q.drained_bytes + q.discarded_bytes + pending
        );
        // synchronous healing exchanges are counted but never queued
        assert!(q.queued_bytes <= received);

        for id in sim.failed_last_round() {
            prev.remove(id);
        }
        for action in sim.last_healing() {
            if let HealingAction::Created(d) = action {
                prev.remove(&d.missing);
            }
        }
        for node in sim.env().live_node_agents() {
            if let Some(before) = prev.get(&node.id()) {
                assert!(
                    before.is_subset(node.knowledge()),
                    "node {} forgot something",
                    node.id()
                );
            }
        }
        prev = sim
            .env()
            .live_node_agents()
            .map(|n| (n.id(), n.knowledge().clone()))
            .collect();
    }
}

/// Two runs of the same configuration agree on every recorded value.
pub fn replay_is_bit_identical(cfg: &ExperimentConfig) {
    let a = run_experiment(cfg).unwrap();
    let b = run_experiment(cfg).unwrap();
    for (x, y) in a.runs.iter().zip(&b.runs) {
        assert_eq!(x.series.len(), y.series.len());
        for (r, s) in x.series.iter().zip(&y.series) {
            assert_eq!(
                r.similarity_pct.map(f64::to_bits),
                s.similarity_pct.map(f64::to_bits)
            );
            assert_eq!(r, s);
        }
        assert_eq!(x.final_graph.edge_set(), y.final_graph.edge_set());
    }
}
