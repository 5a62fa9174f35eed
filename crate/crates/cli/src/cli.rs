use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use netheal::engine::{ExperimentConfig, FailureWindow, SimilarityCadence};
use netheal::node::Protocol;
use netheal::topology::{GeneratorKind, GeneratorParams};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "netheal",
    version,
    about = "Round-based network self-healing simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment and write per-repetition series and a summary.
    Run(RunArgs),
    /// Find the failure-free round at which knowledge gathering settles.
    Refpoint(RefpointArgs),
    /// Relative differences between the integrated metrics of two runs.
    Compare(CompareArgs),
    /// Write a generated topology as an edge list.
    Gen(GenArgs),
}

/// Experiment settings. Flags override values from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// TOML experiment file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Generator kind (small_world, community, scale_free, hub_spoke,
    /// forest_hub_spoke, as_surrogate) or the path of an edge-list file.
    #[arg(long)]
    pub topology: Option<String>,
    /// Node count for generated topologies.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub protocol: Option<Protocol>,
    /// Per-node failure probability per round inside the window.
    #[arg(long = "pf")]
    pub p_f: Option<f64>,
    /// Failure window as `start,stop,end`.
    #[arg(long)]
    pub window: Option<FailureWindow>,
    #[arg(long)]
    pub reps: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub k_agents: Option<u32>,
    #[arg(long)]
    pub k_trickle: Option<u32>,
    /// every_round, final_round or never.
    #[arg(long)]
    pub similarity: Option<SimilarityCadence>,
}

impl ExperimentArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
                ExperimentConfig::from_toml(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(t) = &self.topology {
            cfg.generator = parse_topology(t, &cfg.generator);
        }
        if let Some(n) = self.n {
            cfg.generator.n = n;
        }
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(protocol, p_f, window, reps, seed, k_agents, k_trickle, similarity);
        cfg.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

/// A known kind keeps the other generator fields; anything else is a path.
fn parse_topology(value: &str, current: &GeneratorParams) -> GeneratorParams {
    match value.parse::<GeneratorKind>() {
        Ok(kind) if kind != GeneratorKind::EdgeList => GeneratorParams {
            kind,
            path: None,
            ..current.clone()
        },
        _ => GeneratorParams::edge_list(value),
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Output directory.
    #[arg(long, env = "NETHEAL_OUT", default_value = "netheal-out")]
    pub out: PathBuf,
    /// Skip the per-round CSV files.
    #[arg(long)]
    pub no_csv: bool,
    /// Skip summary.json.
    #[arg(long)]
    pub no_summary: bool,
    /// Skip the final edge list and missing-node files.
    #[arg(long)]
    pub no_topology: bool,
}

#[derive(Debug, Args)]
pub struct RefpointArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Give up after this many rounds.
    #[arg(long)]
    pub budget: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Result directory (or summary file) of the first run.
    pub a: PathBuf,
    /// Result directory (or summary file) of the second run.
    pub b: PathBuf,
    /// Metric to compare, or `all`.
    #[arg(long, default_value = "received_bytes")]
    pub metric: String,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: GeneratorKind,
    #[arg(long)]
    pub n: Option<usize>,
    /// Lattice degree (small world, community).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Destination file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
