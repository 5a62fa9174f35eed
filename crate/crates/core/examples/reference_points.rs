//! Prints failure-free reference rounds for Trickle and mobile agents on
//! every built-in topology and the AS surrogate.
//!
//! `cargo run -p netheal --example reference_points --release [-- reps]`

use std::sync::Arc;
use std::time::Instant;

use netheal::engine::{build_graph, find_reference_point_on, ExperimentConfig};
use netheal::node::Protocol;
use netheal::topology::{as_surrogate, GeneratorKind, GeneratorParams};

fn main() {
    let reps: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let mut cases = vec![("as_surrogate".to_string(), Arc::new(as_surrogate()), 3u32)];
    for kind in [
        GeneratorKind::SmallWorld,
        GeneratorKind::Community,
        GeneratorKind::ScaleFree,
        GeneratorKind::HubSpoke,
        GeneratorKind::ForestHubSpoke,
    ] {
        let cfg = ExperimentConfig {
            generator: GeneratorParams::of_kind(kind),
            ..Default::default()
        };
        cases.push((
            format!("{kind:?}"),
            Arc::new(build_graph(&cfg).expect("graph")),
            3,
        ));
    }
    for (name, graph, k_agents) in cases {
        for protocol in [Protocol::Trickle, Protocol::MobileAgents] {
            let cfg = ExperimentConfig {
                protocol,
                reps,
                k_agents,
                ..Default::default()
            };
            let t = Instant::now();
            match find_reference_point_on(&cfg, Arc::clone(&graph)) {
                Ok(rp) => {
                    let mut v = rp.per_rep.clone();
                    v.sort_unstable();
                    println!(
                        "{name:<16} {protocol:<14} reference={:<4} range={}..{} ({:.2?})",
                        rp.round,
                        v[0],
                        v[v.len() - 1],
                        t.elapsed()
                    );
                }
                Err(e) => println!("{name:<16} {protocol:<14} error: {e}"),
            }
        }
    }
}
