use std::path::Path;

use choix::models::{AssessmentShape, ModelKind};
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Experiment settings, read from JSON.
///
/// ```json
/// { "seed": 42, "dim": 4, "L": 30, "reps": 7, "set_size": [2, 8],
///   "model": "max", "extremes_per_lowerexp": 4 }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub reps: usize,
    #[serde(default = "default_set_size")]
    pub set_size: (usize, usize),
    #[serde(default = "default_model")]
    pub model: ModelKind,
    #[serde(default = "default_extremes")]
    pub extremes_per_lowerexp: usize,
    /// Wall-clock limit for a single cell, in seconds.
    #[serde(default = "default_budget")]
    pub budget_secs: f64,
    /// Query sets per row in the timing experiment.
    #[serde(default = "default_queries")]
    pub queries: usize,
    #[serde(default)]
    pub epsilon: EpsilonGrid,
}

/// `start, start + step, …` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for EpsilonGrid {
    fn default() -> Self {
        Self { start: 0.03, stop: 0.99, step: 0.03 }
    }
}

impl EpsilonGrid {
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0u32;
        loop {
            let eps = self.start + f64::from(k) * self.step;
            if eps > self.stop + self.step * 1e-6 {
                break;
            }
            // snap to the decimal grid so 0.03·33 prints and compares as 0.99
            out.push((eps * 1e9).round() / 1e9);
            k += 1;
        }
        out
    }
}

fn default_dim() -> usize {
    4
}

fn default_set_size() -> (usize, usize) {
    (2, 8)
}

fn default_model() -> ModelKind {
    ModelKind::Max
}

fn default_extremes() -> usize {
    4
}

fn default_budget() -> f64 {
    60.0
}

fn default_queries() -> usize {
    10
}

impl ExperimentConfig {
    /// Desk-scale defaults for one model.
    pub fn desk(seed: u64, model: ModelKind) -> Self {
        Self {
            seed,
            dim: default_dim(),
            l: 10,
            reps: 3,
            set_size: default_set_size(),
            model,
            extremes_per_lowerexp: default_extremes(),
            budget_secs: default_budget(),
            queries: default_queries(),
            epsilon: EpsilonGrid::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.dim == 0 {
            return fail("dim must be positive".into());
        }
        if self.reps == 0 {
            return fail("reps must be positive".into());
        }
        let (lo, hi) = self.set_size;
        if lo < 2 || lo > hi {
            return fail(format!("set_size [{lo}, {hi}] must satisfy 2 <= min <= max"));
        }
        if self.extremes_per_lowerexp == 0 {
            return fail("extremes_per_lowerexp must be positive".into());
        }
        if !(self.budget_secs > 0.0 && self.budget_secs.is_finite()) {
            return fail(format!("budget_secs must be positive, got {}", self.budget_secs));
        }
        if self.queries == 0 {
            return fail("queries must be positive".into());
        }
        let g = self.epsilon;
        if !(g.step > 0.0 && g.start >= 0.0 && g.stop <= 1.0 && g.start <= g.stop) {
            return fail(format!("epsilon grid {}..{} step {} must lie in [0, 1] with a positive step", g.start, g.stop, g.step));
        }
        Ok(())
    }

    pub fn shape(&self) -> AssessmentShape {
        AssessmentShape {
            kind: self.model,
            dim: self.dim,
            pairs: self.l,
            extremes_per_lowerexp: self.extremes_per_lowerexp,
            set_size: self.set_size,
        }
    }

    pub fn rep_seed(&self, rep: usize) -> u64 {
        self.seed.wrapping_add(rep as u64)
    }

    pub fn budget(&self) -> std::time::Duration {
        std::time::Duration::from_secs_f64(self.budget_secs)
    }
}
