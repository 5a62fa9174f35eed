//! Per-round measurements and the summary statistics built on them.

pub mod similarity;

use serde::{Deserialize, Serialize};

use crate::env::{NetworkEnvironment, Traffic};

pub use similarity::graph_similarity;

/// One row of a run's time series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub round: u32,
    /// `None` when similarity was not computed for this round.
    pub similarity_pct: Option<f64>,
    pub node_memory_bytes: u64,
    pub agent_memory_bytes: u64,
    pub received_bytes: u64,
    pub received_messages: u64,
    pub live_nodes: u64,
    pub live_agents: u64,
}

impl MetricsRecord {
    pub fn total_memory_bytes(&self) -> u64 {
        self.node_memory_bytes + self.agent_memory_bytes
    }
}

/// Barrier snapshot. `traffic` holds the round's delivery counters and
/// `similarity_pct` is computed by the caller, which owns the original graph.
pub fn snapshot(
    env: &NetworkEnvironment,
    traffic: &Traffic,
    similarity_pct: Option<f64>,
) -> MetricsRecord {
    MetricsRecord {
        round: env.round(),
        similarity_pct,
        node_memory_bytes: env.node_memory_bytes(),
        agent_memory_bytes: env.agent_memory_bytes(),
        received_bytes: traffic.received_bytes,
        received_messages: traffic.received_messages,
        live_nodes: env.graph().live_count() as u64,
        live_agents: env.agents().len() as u64,
    }
}

/// Relative percent difference `|a-b| / ((a+b)/2) * 100`; 0 when both are 0.
pub fn rpd(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    (a - b).abs() / ((a + b) / 2.0) * 100.0
}

/// Discrete integral of a per-round series: the plain sum.
pub fn integrate<I>(series: I) -> f64
where
    I: IntoIterator,
    I::Item: Into<f64>,
{
    series.into_iter().map(Into::into).sum()
}

/// Metric columns that can be integrated and compared across runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    SimilarityPct,
    NodeMemoryBytes,
    AgentMemoryBytes,
    TotalMemoryBytes,
    ReceivedBytes,
    ReceivedMessages,
    LiveNodes,
    LiveAgents,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::SimilarityPct,
        Metric::NodeMemoryBytes,
        Metric::AgentMemoryBytes,
        Metric::TotalMemoryBytes,
        Metric::ReceivedBytes,
        Metric::ReceivedMessages,
        Metric::LiveNodes,
        Metric::LiveAgents,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SimilarityPct => "similarity_pct",
            Metric::NodeMemoryBytes => "node_memory_bytes",
            Metric::AgentMemoryBytes => "agent_memory_bytes",
            Metric::TotalMemoryBytes => "total_memory_bytes",
            Metric::ReceivedBytes => "received_bytes",
            Metric::ReceivedMessages => "received_messages",
            Metric::LiveNodes => "live_nodes",
            Metric::LiveAgents => "live_agents",
        }
    }

    /// Value in `record`; rounds without a similarity value read as `None`.
    pub fn value(self, record: &MetricsRecord) -> Option<f64> {
        Some(match self {
            Metric::SimilarityPct => return record.similarity_pct,
            Metric::NodeMemoryBytes => record.node_memory_bytes as f64,
            Metric::AgentMemoryBytes => record.agent_memory_bytes as f64,
            Metric::TotalMemoryBytes => record.total_memory_bytes() as f64,
            Metric::ReceivedBytes => record.received_bytes as f64,
            Metric::ReceivedMessages => record.received_messages as f64,
            Metric::LiveNodes => record.live_nodes as f64,
            Metric::LiveAgents => record.live_agents as f64,
        })
    }

    /// Integral of this metric over a run; rounds without a value are skipped.
    pub fn integrate(self, series: &[MetricsRecord]) -> f64 {
        integrate(series.iter().filter_map(|r| self.value(r)))
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// Minimum, median and maximum of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Spread {
    /// `None` for an empty sample. The median of an even sample is the
    /// mean of the two middle values.
    pub fn of(values: &[f64]) -> Option<Spread> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        Some(Spread {
            min: v[0],
            median,
            max: v[n - 1],
        })
    }
}
