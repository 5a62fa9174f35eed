//! Per-experiment summary: integrated metric spreads across repetitions and
//! recovery counts, plus the relative-difference comparison of two summaries.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use netheal::engine::{ExperimentConfig, ExperimentResult};
use netheal::metrics::{rpd, Metric, Spread};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::{CODE_VERSION, FORMAT_VERSION};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub rep: u32,
    pub seed: u64,
    pub recovered: bool,
    pub final_similarity_pct: Option<f64>,
    pub missing: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub format: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub reps: u32,
    /// Repetitions whose final graph differs from the original.
    pub failed_reps: usize,
    pub final_similarity_pct: Option<Spread>,
    /// Integral over rounds of each metric, spread across repetitions.
    pub integrated: BTreeMap<String, Spread>,
    pub runs: Vec<RunSummary>,
}

impl Summary {
    pub fn from_result(config: &ExperimentConfig, result: &ExperimentResult) -> Summary {
        let integrated = Metric::ALL
            .into_iter()
            .filter_map(|m| {
                let v: Vec<f64> = result.runs.iter().map(|r| m.integrate(&r.series)).collect();
                Spread::of(&v).map(|s| (m.name().to_string(), s))
            })
            .collect();
        let finals: Vec<f64> = result
            .runs
            .iter()
            .filter_map(|r| r.final_similarity_pct())
            .collect();
        let runs = result
            .runs
            .iter()
            .map(|r| RunSummary {
                rep: r.rep,
                seed: r.seed,
                recovered: r.recovered,
                final_similarity_pct: r.final_similarity_pct(),
                missing: r.missing.iter().map(|id| id.0).collect(),
            })
            .collect();
        Summary {
            format: format!("netheal summary {FORMAT_VERSION}"),
            version: CODE_VERSION.to_string(),
            seed: config.seed,
            config: config.clone(),
            reps: config.reps,
            failed_reps: result.failed_reps(),
            final_similarity_pct: (finals.len() == result.runs.len())
                .then(|| Spread::of(&finals))
                .flatten(),
            integrated,
            runs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("summary serializes");
        fs::write(path, text + "\n").map_err(CliError::io(path))
    }

    /// Reads `dir/summary.json`, or `path` itself when it is a file.
    pub fn load(path: &Path) -> Result<Summary> {
        let file = if path.is_dir() {
            path.join(SUMMARY_FILE)
        } else {
            path.to_path_buf()
        };
        let text = fs::read_to_string(&file).map_err(CliError::io(&file))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", file.display())))
    }

    pub fn metric(&self, metric: Metric) -> Result<Spread> {
        self.integrated
            .get(metric.name())
            .copied()
            .ok_or_else(|| CliError::Config(format!("summary has no `{}` column", metric.name())))
    }
}

/// Integrated spreads of one metric in two summaries and their relative
/// differences, in max / median / min order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub metric: Metric,
    pub a: Spread,
    pub b: Spread,
    pub rpd: [f64; 3],
}

impl Comparison {
    pub fn new(metric: Metric, a: &Summary, b: &Summary) -> Result<Comparison> {
        let (a, b) = (a.metric(metric)?, b.metric(metric)?);
        Ok(Comparison {
            metric,
            a,
            b,
            rpd: [
                rpd(a.max, b.max),
                rpd(a.median, b.median),
                rpd(a.min, b.min),
            ],
        })
    }

    pub const HEADER: &'static str =
        "metric,a_max,a_median,a_min,b_max,b_median,b_min,rpd_max,rpd_median,rpd_min";

    pub fn row(&self) -> String {
        let (a, b) = (self.a, self.b);
        format!(
            "{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.2},{:.2},{:.2}",
            self.metric.name(),
            a.max,
            a.median,
            a.min,
            b.max,
            b.median,
            b.min,
            self.rpd[0],
            self.rpd[1],
            self.rpd[2]
        )
    }
}
