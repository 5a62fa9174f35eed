use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::node::Protocol;
use crate::topology::GeneratorParams;
use crate::{Error, Result};

/// Rounds `[start, stop)` may see failures; the run ends before round `end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[u32; 3]", into = "[u32; 3]")]
pub struct FailureWindow {
    pub start: u32,
    pub stop: u32,
    pub end: u32,
}

impl FailureWindow {
    pub fn new(start: u32, stop: u32, end: u32) -> Result<Self> {
        if start > stop || stop > end {
            return Err(Error::InvalidParams(format!(
                "window needs start <= stop <= end, got ({start}, {stop}, {end})"
            )));
        }
        Ok(FailureWindow { start, stop, end })
    }

    pub fn contains(&self, round: u32) -> bool {
        (self.start..self.stop).contains(&round)
    }

    /// Window of `len` failing rounds from `start`, followed by `len`
    /// recovery rounds.
    pub fn symmetric(start: u32, len: u32) -> Self {
        FailureWindow {
            start,
            stop: start + len,
            end: start + 2 * len,
        }
    }
}

impl Default for FailureWindow {
    fn default() -> Self {
        FailureWindow {
            start: 0,
            stop: 50,
            end: 100,
        }
    }
}

impl TryFrom<[u32; 3]> for FailureWindow {
    type Error = Error;

    fn try_from(v: [u32; 3]) -> Result<Self> {
        FailureWindow::new(v[0], v[1], v[2])
    }
}

impl From<FailureWindow> for [u32; 3] {
    fn from(w: FailureWindow) -> Self {
        [w.start, w.stop, w.end]
    }
}

impl fmt::Display for FailureWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.start, self.stop, self.end)
    }
}

impl FromStr for FailureWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidParams(format!("window must be `start,stop,end`, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut v = [0u32; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| bad())?;
        }
        FailureWindow::try_from(v)
    }
}

/// How often the similarity column is computed. Identical graphs are always
/// scored cheaply; the cadence only matters for rounds where the graph
/// differs from the original.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityCadence {
    #[default]
    EveryRound,
    /// Full scoring on the last round only; other rounds with a changed
    /// graph record no value.
    FinalRound,
    /// No full scoring: intact rounds record 100, others record no value.
    Never,
}

impl FromStr for SimilarityCadence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "every_round" => Ok(SimilarityCadence::EveryRound),
            "final_round" => Ok(SimilarityCadence::FinalRound),
            "never" => Ok(SimilarityCadence::Never),
            other => Err(Error::InvalidParams(format!(
                "unknown similarity cadence `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generator: GeneratorParams,
    /// Per-node, per-round failure probability inside the window.
    pub p_f: f64,
    pub protocol: Protocol,
    pub k_agents: u32,
    pub k_trickle: u32,
    pub window: FailureWindow,
    pub reps: u32,
    pub seed: u64,
    pub similarity: SimilarityCadence,
    /// Round limit for reference-point searches.
    pub round_budget: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            generator: GeneratorParams::default(),
            p_f: 0.0,
            protocol: Protocol::AllInfo,
            k_agents: 3,
            k_trickle: 3,
            window: FailureWindow::default(),
            reps: 30,
            seed: 1,
            similarity: SimilarityCadence::default(),
            round_budget: 200,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if !(0.0..=1.0).contains(&self.p_f) {
            return bad(format!("p_f must be in [0, 1], got {}", self.p_f));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.k_agents == 0 || self.k_trickle == 0 {
            return bad("redundancy constants must be at least 1".into());
        }
        FailureWindow::new(self.window.start, self.window.stop, self.window.end)?;
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::InvalidParams(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Seed of repetition `rep`.
    pub fn rep_seed(&self, rep: u32) -> u64 {
        self.seed.wrapping_add(u64::from(rep))
    }
}
