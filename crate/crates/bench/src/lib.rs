//! Seeded experiments on random assessments: generator sizes along growing
//! assessments, sizes under ε-contaminated maximality, and build/choose
//! timings with the break-even number of queries. Results are written as CSV.

pub mod config;
pub mod experiments;
pub mod report;

use std::io::Write;

pub use config::{EpsilonGrid, ExperimentConfig};
pub use experiments::{
    breakeven, generator_sizes, run_epsilon_experiment, run_size_experiment, run_timing_experiment, EpsilonRow,
    EpsilonSample, SizeRow, SizeSample, TimingRow, TimingSample,
};

use choix::ToleranceConfig;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] choix::Error),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// The three experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Size,
    Epsilon,
    Timing,
}

impl std::str::FromStr for ExperimentKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "size" => Ok(Self::Size),
            "epsilon" => Ok(Self::Epsilon),
            "timing" => Ok(Self::Timing),
            other => Err(BenchError::Config(format!("unknown experiment {other:?}"))),
        }
    }
}

/// Runs one experiment and writes its CSV to `out`.
pub fn run_to_csv<W: Write>(kind: ExperimentKind, cfg: &ExperimentConfig, tol: &ToleranceConfig, out: W) -> Result<(), BenchError> {
    match kind {
        ExperimentKind::Size => {
            let rows = run_size_experiment(cfg, tol)?;
            report::write_csv(out, &report::SIZE_HEADER, &report::size_records(&rows))
        }
        ExperimentKind::Epsilon => {
            let rows = run_epsilon_experiment(cfg, tol)?;
            report::write_csv(out, &report::EPSILON_HEADER, &report::epsilon_records(&rows))
        }
        ExperimentKind::Timing => {
            let rows = run_timing_experiment(cfg, tol)?;
            report::write_csv(out, &report::TIMING_HEADER, &report::timing_records(&rows))
        }
    }
}
