//! Counts fully recovered repetitions for each protocol on the AS
//! surrogate at `p_f = 0.5`.
//!
//! `cargo run -p netheal --example recovery_rates --release [-- reps start k_agents]`

use std::sync::Arc;
use std::time::Instant;

use netheal::engine::{run_experiment_on, ExperimentConfig, FailureWindow, SimilarityCadence};
use netheal::node::Protocol;
use netheal::topology::as_surrogate;

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u32>().expect("integer argument"));
    let reps = args.next().unwrap_or(30);
    let start = args.next().unwrap_or(13);
    let k_agents = args.next().unwrap_or(3);
    let graph = Arc::new(as_surrogate());
    for protocol in [Protocol::Trickle, Protocol::MobileAgents] {
        let cfg = ExperimentConfig {
            protocol,
            p_f: 0.5,
            reps,
            k_agents,
            window: FailureWindow::symmetric(start, 25),
            similarity: SimilarityCadence::FinalRound,
            ..Default::default()
        };
        let t = Instant::now();
        let res = run_experiment_on(&cfg, Arc::clone(&graph)).expect("run");
        let missing: Vec<usize> = res.runs.iter().map(|r| r.missing.len()).collect();
        println!(
            "{protocol:<14} window={} failed={}/{} missing={missing:?} ({:.2?})",
            cfg.window,
            res.failed_reps(),
            reps,
            t.elapsed()
        );
    }
}
