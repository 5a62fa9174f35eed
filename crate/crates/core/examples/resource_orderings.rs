//! Median integrated resource use of Trickle and mobile agents on every
//! topology, for failure windows starting at either protocol's reference
//! round.
//!
//! `cargo run -p netheal --example resource_orderings --release [-- reps]`

use std::sync::Arc;
use std::time::Instant;

use netheal::engine::{
    build_graph, run_experiment_on, ExperimentConfig, FailureWindow, SimilarityCadence,
};
use netheal::metrics::{Metric, Spread};
use netheal::node::Protocol;
use netheal::topology::{as_surrogate, GeneratorKind, GeneratorParams};
use netheal::Graph;

const METRICS: [Metric; 4] = [
    Metric::ReceivedBytes,
    Metric::ReceivedMessages,
    Metric::NodeMemoryBytes,
    Metric::TotalMemoryBytes,
];

fn main() {
    let reps = std::env::args()
        .nth(1)
        .map_or(30, |a| a.parse().expect("integer"));
    // (name, kind, p_f, trickle start, agent start); AS has no generator kind
    let rows: [(&str, Option<GeneratorKind>, f64, u32, u32); 6] = [
        ("as", None, 0.5, 13, 38),
        ("small_world", Some(GeneratorKind::SmallWorld), 0.5, 12, 25),
        ("community", Some(GeneratorKind::Community), 0.5, 20, 41),
        ("forest", Some(GeneratorKind::ForestHubSpoke), 0.25, 17, 35),
        ("hub_spoke", Some(GeneratorKind::HubSpoke), 0.25, 5, 14),
        ("scale_free", Some(GeneratorKind::ScaleFree), 0.25, 17, 33),
    ];
    for (name, kind, p_f, t_start, a_start) in rows {
        let base = ExperimentConfig {
            generator: GeneratorParams::of_kind(kind.unwrap_or(GeneratorKind::SmallWorld)),
            p_f,
            reps,
            similarity: SimilarityCadence::Never,
            ..Default::default()
        };
        let graph: Arc<Graph> = Arc::new(match kind {
            Some(_) => build_graph(&base).unwrap(),
            None => as_surrogate(),
        });
        for start in [t_start, a_start] {
            for k_agents in [3, 5] {
                let t = Instant::now();
                let mut medians = Vec::new();
                for protocol in [Protocol::Trickle, Protocol::MobileAgents] {
                    let cfg = ExperimentConfig {
                        protocol,
                        k_agents,
                        window: FailureWindow::symmetric(start, 25),
                        ..base.clone()
                    };
                    let res = run_experiment_on(&cfg, Arc::clone(&graph)).unwrap();
                    let m: Vec<f64> = METRICS
                        .iter()
                        .map(|metric| {
                            let v: Vec<f64> = res
                                .runs
                                .iter()
                                .map(|r| metric.integrate(&r.series))
                                .collect();
                            Spread::of(&v).unwrap().median
                        })
                        .collect();
                    medians.push(m);
                }
                let marks: Vec<String> = METRICS
                    .iter()
                    .enumerate()
                    .map(|(i, metric)| {
                        let sign = if medians[1][i] < medians[0][i] {
                            '<'
                        } else {
                            '>'
                        };
                        format!(
                            "{}: ma {sign} trickle ({:.3e} vs {:.3e})",
                            metric.name(),
                            medians[1][i],
                            medians[0][i]
                        )
                    })
                    .collect();
                println!(
                    "{name:<12} start={start:<3} k_ma={k_agents} {} [{:.1?}]",
                    marks.join(" | "),
                    t.elapsed()
                );
            }
        }
    }
}
