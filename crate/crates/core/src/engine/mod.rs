//! Round scheduler and experiment orchestration.
//!
//! Each round runs, in order: failure draws, message delivery, node turns
//! (shuffled), agent turns (shuffled), healing (ascending id), then the
//! barrier snapshot.

mod config;

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::agents::agents_phase;
use crate::env::{NetworkEnvironment, ProtocolParams, Traffic};
use crate::healing::{healing_phase, HealingAction};
use crate::messaging::{knowledge_size, TopologyKnowledge};
use crate::metrics::{graph_similarity, snapshot, MetricsRecord};
use crate::node::Protocol;
use crate::rng::{self, Streams};
use crate::topology::{generate, Graph, NodeId};
use crate::{Error, Result};

pub use config::{ExperimentConfig, FailureWindow, SimilarityCadence};

/// Builds the experiment's network. Generators draw from the root seed's
/// generator stream, so every repetition shares one graph.
pub fn build_graph(config: &ExperimentConfig) -> Result<Graph> {
    generate(
        &config.generator,
        &mut rng::stream(config.seed, rng::GENERATOR),
    )
}

/// A single seeded run.
pub struct Simulation {
    original: Arc<Graph>,
    env: NetworkEnvironment,
    streams: Streams,
    p_f: f64,
    window: FailureWindow,
    cadence: SimilarityCadence,
    round: u32,
    last_traffic: Traffic,
    last_healing: Vec<HealingAction>,
    failed_this_round: Vec<NodeId>,
}

impl Simulation {
    pub fn new(config: &ExperimentConfig, graph: Arc<Graph>, seed: u64) -> Result<Self> {
        config.validate()?;
        if graph.live_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut streams = Streams::new(seed);
        let params = ProtocolParams {
            protocol: config.protocol,
            k_trickle: config.k_trickle,
            k_agents: config.k_agents,
        };
        let env = NetworkEnvironment::new((*graph).clone(), params, &mut streams.trickle);
        Ok(Simulation {
            original: graph,
            env,
            streams,
            p_f: config.p_f,
            window: config.window,
            cadence: config.similarity,
            round: 0,
            last_traffic: Traffic::default(),
            last_healing: Vec::new(),
            failed_this_round: Vec::new(),
        })
    }

    pub fn env(&self) -> &NetworkEnvironment {
        &self.env
    }

    pub fn env_mut(&mut self) -> &mut NetworkEnvironment {
        &mut self.env
    }

    pub fn original(&self) -> &Graph {
        &self.original
    }

    /// Index of the next round to run.
    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn is_finished(&self) -> bool {
        self.round >= self.window.end
    }

    /// Counters of the last completed round.
    pub fn last_traffic(&self) -> Traffic {
        self.last_traffic
    }

    pub fn last_healing(&self) -> &[HealingAction] {
        &self.last_healing
    }

    pub fn failed_last_round(&self) -> &[NodeId] {
        &self.failed_this_round
    }

    /// True when the current graph has exactly the original nodes and edges.
    pub fn is_recovered(&self) -> bool {
        let g = self.env.graph();
        g.live_nodes().eq(self.original.live_nodes()) && g.edges().eq(self.original.edges())
    }

    /// Ids that are currently down.
    pub fn missing_nodes(&self) -> Vec<NodeId> {
        self.original
            .live_nodes()
            .filter(|&id| !self.env.graph().is_alive(id))
            .collect()
    }

    fn failure_phase(&mut self) {
        self.failed_this_round.clear();
        if !self.window.contains(self.round) {
            return;
        }
        // One draw per id slot regardless of state keeps failure sequences
        // aligned across protocols.
        for slot in 0..self.env.graph().capacity() {
            let u: f64 = self.streams.failures.gen();
            let id = NodeId(slot as u32);
            if u < self.p_f && self.env.graph().is_alive(id) {
                self.env.kill(id).expect("alive node");
                self.failed_this_round.push(id);
            }
        }
    }

    fn node_phase(&mut self) {
        let mut order: Vec<NodeId> = self.env.graph().live_nodes().collect();
        order.shuffle(&mut self.streams.node_order);
        for id in order {
            self.env.node_act(id, &mut self.streams.trickle);
        }
    }

    fn similarity_pct(&self, last: bool) -> Result<Option<f64>> {
        if self.is_recovered() {
            return Ok(Some(100.0));
        }
        if self.env.graph().live_count() == 0 {
            return Ok(Some(0.0));
        }
        match self.cadence {
            SimilarityCadence::Never => Ok(None),
            SimilarityCadence::FinalRound if !last => Ok(None),
            _ => Ok(Some(
                100.0 * graph_similarity(&self.original, self.env.graph())?,
            )),
        }
    }

    /// Runs one round and returns its barrier snapshot.
    pub fn step(&mut self) -> Result<MetricsRecord> {
        self.env.set_round(self.round);
        self.failure_phase();
        self.env.deliver_all();
        self.node_phase();
        if self.env.protocol() == Protocol::MobileAgents {
            agents_phase(
                &mut self.env,
                &mut self.streams.agent_order,
                &mut self.streams.agents,
            );
        }
        self.last_healing = healing_phase(&mut self.env, &mut self.streams.trickle)?;
        self.last_traffic = self.env.take_traffic();
        let last = self.round + 1 >= self.window.end;
        let sim = self.similarity_pct(last)?;
        let record = snapshot(&self.env, &self.last_traffic, sim);
        self.round += 1;
        Ok(record)
    }

    /// Runs the remaining rounds up to the window end.
    pub fn run(mut self, rep: u32, seed: u64) -> Result<RunResult> {
        let mut series = Vec::with_capacity(self.window.end as usize);
        while !self.is_finished() {
            series.push(self.step()?);
        }
        Ok(RunResult {
            rep,
            seed,
            recovered: self.is_recovered(),
            missing: self.missing_nodes(),
            final_graph: self.env.graph().clone(),
            series,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunResult {
    pub rep: u32,
    pub seed: u64,
    pub series: Vec<MetricsRecord>,
    /// Final graph equals the original.
    pub recovered: bool,
    pub missing: Vec<NodeId>,
    #[serde(skip)]
    pub final_graph: Graph,
}

impl RunResult {
    pub fn final_similarity_pct(&self) -> Option<f64> {
        self.series.last().and_then(|r| r.similarity_pct)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub graph: Arc<Graph>,
    pub runs: Vec<RunResult>,
}

impl ExperimentResult {
    pub fn failed_reps(&self) -> usize {
        self.runs.iter().filter(|r| !r.recovered).count()
    }
}

/// Runs every repetition of `config` on its generated graph.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    run_experiment_on(config, Arc::new(build_graph(config)?))
}

/// Runs every repetition of `config` on `graph`. Repetition `i` uses seed
/// `config.seed + i`.
pub fn run_experiment_on(config: &ExperimentConfig, graph: Arc<Graph>) -> Result<ExperimentResult> {
    let mut runs = Vec::with_capacity(config.reps as usize);
    for rep in 0..config.reps {
        let seed = config.rep_seed(rep);
        runs.push(Simulation::new(config, Arc::clone(&graph), seed)?.run(rep, seed)?);
    }
    Ok(ExperimentResult { graph, runs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferencePoint {
    pub protocol: Protocol,
    /// The reference round.
    pub round: u32,
    /// Per-repetition convergence rounds.
    pub per_rep: Vec<u32>,
}

/// Round at which a failure-free run stops gathering knowledge.
///
/// Trickle: per repetition, the first round whose barrier shows every node
/// holding the whole topology; the reference is the latest of these, the
/// round from which all repetitions agree. Mobile agents: per repetition,
/// the first round with no live agents; the reference is the median (upper
/// median for even counts). All-info nodes start complete, so 0.
pub fn find_reference_point(config: &ExperimentConfig) -> Result<ReferencePoint> {
    config.validate()?;
    find_reference_point_on(config, Arc::new(build_graph(config)?))
}

pub fn find_reference_point_on(
    config: &ExperimentConfig,
    graph: Arc<Graph>,
) -> Result<ReferencePoint> {
    if config.p_f != 0.0 {
        return Err(Error::InvalidParams("reference points need p_f = 0".into()));
    }
    let protocol = config.protocol;
    if protocol == Protocol::AllInfo {
        return Ok(ReferencePoint {
            protocol,
            round: 0,
            per_rep: vec![0; config.reps as usize],
        });
    }
    let mut cfg = config.clone();
    cfg.window = FailureWindow::new(0, 0, config.round_budget)?;
    let full_bytes = knowledge_size(&TopologyKnowledge::from_graph(&graph)) as u64;
    let target = full_bytes * graph.live_count() as u64;
    let mut per_rep = Vec::with_capacity(cfg.reps as usize);
    for rep in 0..cfg.reps {
        let mut sim = Simulation::new(&cfg, Arc::clone(&graph), cfg.rep_seed(rep))?;
        let mut hit = None;
        while !sim.is_finished() {
            let rec = sim.step()?;
            let done = match protocol {
                Protocol::Trickle => rec.node_memory_bytes == target,
                _ => rec.live_agents == 0,
            };
            if done {
                hit = Some(rec.round);
                break;
            }
        }
        match hit {
            Some(r) => per_rep.push(r),
            None => {
                return Err(Error::NonConvergence {
                    budget: cfg.round_budget,
                    partial: per_rep,
                })
            }
        }
    }
    let round = match protocol {
        Protocol::Trickle => per_rep.iter().copied().max().unwrap_or(0),
        _ => {
            let mut sorted = per_rep.clone();
            sorted.sort_unstable();
            sorted[sorted.len() / 2]
        }
    };
    Ok(ReferencePoint {
        protocol,
        round,
        per_rep,
    })
}
