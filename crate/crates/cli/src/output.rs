//! On-disk formats. Every text file starts with `#` comment lines naming the
//! format version, the code version, the seed and the configuration.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use netheal::engine::{ExperimentConfig, RunResult};
use netheal::metrics::MetricsRecord;
use netheal::topology::write_edge_list;
use netheal::{Graph, NodeId};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const CSV_COLUMNS: [&str; 8] = [
    "round",
    "similarity_pct",
    "node_memory_bytes",
    "agent_memory_bytes",
    "received_bytes",
    "received_messages",
    "live_nodes",
    "live_agents",
];

/// Provenance lines shared by every emitted text file.
pub fn header(kind: &str, config: &ExperimentConfig, seed: u64) -> Vec<String> {
    let json = serde_json::to_string(config).expect("config serializes");
    vec![
        format!("netheal {kind} format {FORMAT_VERSION}"),
        format!("version {CODE_VERSION}"),
        format!("seed {seed}"),
        format!("config {json}"),
    ]
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(CliError::io(path))
}

pub fn rep_stem(rep: u32) -> String {
    format!("rep_{rep:03}")
}

/// One row per round; rounds without a similarity value leave it empty.
pub fn write_round_csv(
    series: &[MetricsRecord],
    header_lines: &[String],
    path: &Path,
) -> Result<()> {
    if series.is_empty() {
        return Err(CliError::Config("cannot write an empty series".into()));
    }
    let mut out = create(path)?;
    let io = CliError::io(path);
    (|| -> std::io::Result<()> {
        for line in header_lines {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(CSV_COLUMNS)?;
        for r in series {
            w.write_record([
                r.round.to_string(),
                r.similarity_pct.map(|s| s.to_string()).unwrap_or_default(),
                r.node_memory_bytes.to_string(),
                r.agent_memory_bytes.to_string(),
                r.received_bytes.to_string(),
                r.received_messages.to_string(),
                r.live_nodes.to_string(),
                r.live_agents.to_string(),
            ])?;
        }
        w.flush()?;
        drop(w);
        out.flush()
    })()
    .map_err(io)
}

pub fn write_graph(graph: &Graph, header_lines: &[String], path: &Path) -> Result<()> {
    write_edge_list(graph, header_lines, create(path)?).map_err(CliError::io(path))
}

/// Ids of original nodes absent at the end of the run, one per line.
pub fn write_missing(missing: &[NodeId], header_lines: &[String], path: &Path) -> Result<()> {
    let mut out = create(path)?;
    (|| -> std::io::Result<()> {
        for line in header_lines {
            writeln!(out, "# {line}")?;
        }
        for id in missing {
            writeln!(out, "{id}")?;
        }
        out.flush()
    })()
    .map_err(CliError::io(path))
}

/// Which artifacts `run` writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Emit {
    pub per_round_csv: bool,
    pub summary_json: bool,
    pub final_topology_snapshot: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Emit {
            per_round_csv: true,
            summary_json: true,
            final_topology_snapshot: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub output_dir: PathBuf,
    pub emit: Emit,
}

impl RunManifest {
    pub fn prepare_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.output_dir).map_err(CliError::io(&self.output_dir))
    }

    /// Writes the per-repetition files of `run`.
    pub fn write_run(&self, run: &RunResult) -> Result<()> {
        let stem = rep_stem(run.rep);
        if self.emit.per_round_csv {
            let h = header("rounds", &self.config, run.seed);
            write_round_csv(
                &run.series,
                &h,
                &self.output_dir.join(format!("{stem}.csv")),
            )?;
        }
        if self.emit.final_topology_snapshot {
            let h = header("edges", &self.config, run.seed);
            write_graph(
                &run.final_graph,
                &h,
                &self.output_dir.join(format!("{stem}.edges")),
            )?;
            let h = header("missing", &self.config, run.seed);
            write_missing(
                &run.missing,
                &h,
                &self.output_dir.join(format!("{stem}.missing")),
            )?;
        }
        Ok(())
    }
}
