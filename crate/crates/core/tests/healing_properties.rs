mod common;

use std::sync::Arc;

use common::props;
use netheal::engine::{ExperimentConfig, FailureWindow, SimilarityCadence, Simulation};
use netheal::metrics::graph_similarity;
use netheal::node::Protocol;
use netheal::topology::{generate_small_world, GeneratorKind, GeneratorParams};
use netheal::{Graph, NodeId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn replicas_are_unique_over_random_scenarios() {
    assert!(props::replica_uniqueness(10_000, 7) > 100_000);
}

#[test]
fn small_graphs_repair_single_and_pair_failures() {
    // 772 graphs with 1..=5 nodes; singles on n >= 2, pairs on n >= 3
    assert!(props::exhaustive_small_repair() > 10_000);
}

#[test]
fn single_failure_is_repaired_in_the_same_round() {
    let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    assert_eq!(
        props::rounds_to_repair(&path, Protocol::AllInfo, &[NodeId(1)], 0, 2),
        Some(1)
    );
    // a and b both lost: c brings back b, then b brings back a
    assert_eq!(
        props::rounds_to_repair(&path, Protocol::AllInfo, &[NodeId(0), NodeId(1)], 0, 3),
        Some(2)
    );
}

#[test]
fn repair_is_monotone_once_failures_stop() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..40u64 {
        let g = generate_small_world(16, 4, 0.3, &mut rng).unwrap();
        let protocol = Protocol::ALL[seed as usize % 3];
        let cfg = ExperimentConfig {
            protocol,
            p_f: 0.3,
            reps: 1,
            window: FailureWindow::new(6, 10, 30).unwrap(),
            ..Default::default()
        };
        let original = g.clone();
        let mut sim = Simulation::new(&cfg, Arc::new(g), seed).unwrap();
        let mut last: Option<(f64, usize, usize)> = None;
        while !sim.is_finished() {
            let round = sim.round();
            let rec = sim.step().unwrap();
            if round < 10 {
                continue;
            }
            let sim_pct = rec.similarity_pct.unwrap();
            let live = sim.env().graph().live_count();
            let edges = sim.env().graph().edge_count();
            assert_eq!(
                sim_pct == 100.0,
                sim.env().graph().edge_set() == original.edge_set()
            );
            if let Some((p, l, e)) = last {
                assert!(live >= l && edges >= e, "seed {seed} round {round}");
                assert!(
                    sim_pct >= p - 1e-9,
                    "seed {seed} round {round}: {sim_pct} < {p}"
                );
            }
            last = Some((sim_pct, live, edges));
        }
        let direct = 100.0 * graph_similarity(&original, sim.env().graph()).unwrap();
        assert!((direct - last.unwrap().0).abs() < 1e-9);
    }
}

#[test]
fn generated_topologies_heal_fully_with_complete_knowledge() {
    for kind in [
        GeneratorKind::SmallWorld,
        GeneratorKind::Community,
        GeneratorKind::ScaleFree,
    ] {
        let cfg = ExperimentConfig {
            generator: GeneratorParams::of_kind(kind),
            protocol: Protocol::AllInfo,
            p_f: 0.1,
            reps: 3,
            window: FailureWindow::new(0, 10, 20).unwrap(),
            similarity: SimilarityCadence::FinalRound,
            ..Default::default()
        };
        let res = netheal::engine::run_experiment(&cfg).unwrap();
        for run in &res.runs {
            assert!(
                run.recovered,
                "{kind:?} rep {}: missing {:?}",
                run.rep, run.missing
            );
            assert_eq!(run.final_similarity_pct(), Some(100.0));
        }
    }
}
