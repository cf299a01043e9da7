use std::time::Instant;

use choix::generators::{assessment_to_conjunctive, assessment_to_conjunctive_naive, conjunctive_to_disjunctive_simplified_until};
use choix::models::{build_assessment, epsilon_contamination, random_assessment, random_option_set, random_pmf, ESet};
use choix::{Assessment, Deadline, Error, Method, OptionSet, Pipeline, ToleranceConfig};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::BenchError;

/// Generator sizes for one assessment. `g_full` is `None` when the
/// construction ran out of budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeSample {
    pub g_naive: BigUint,
    pub g_conj: BigUint,
    pub g_full: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeRow {
    pub l: usize,
    pub samples: Vec<SizeSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSample {
    pub h_naive: usize,
    pub h_simpl: usize,
    pub g_naive: BigUint,
    pub g_conj: BigUint,
    pub g_full: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonRow {
    pub epsilon: f64,
    pub samples: Vec<EpsilonSample>,
}

/// Seconds per method in `[naive, conj, full]` order; `None` marks a timeout.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingSample {
    pub build: [Option<f64>; 3],
    pub choose: [Option<f64>; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub l: usize,
    pub samples: Vec<TimingSample>,
}

/// Sizes of all three generators of `a`.
pub fn generator_sizes(a: &Assessment, tol: &ToleranceConfig, deadline: Deadline) -> Result<SizeSample, BenchError> {
    let naive = assessment_to_conjunctive_naive(a);
    let simple = assessment_to_conjunctive(a, tol)?;
    let g_full = match conjunctive_to_disjunctive_simplified_until(&simple, tol, deadline) {
        Ok(g) => Some(g.len()),
        Err(Error::DeadlineExceeded) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(SizeSample { g_naive: naive.disjunctive_size(), g_conj: simple.disjunctive_size(), g_full })
}

fn rep_assessment(cfg: &ExperimentConfig, rep: usize, tol: &ToleranceConfig) -> Result<(Assessment, ChaCha8Rng), BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rep_seed(rep));
    let (_, a) = random_assessment(&cfg.shape(), &mut rng, tol)?;
    Ok((a, rng))
}

/// Generator sizes along the prefixes `𝒜_{1:ℓ}`, `ℓ = 1..=L`.
pub fn run_size_experiment(cfg: &ExperimentConfig, tol: &ToleranceConfig) -> Result<Vec<SizeRow>, BenchError> {
    cfg.validate()?;
    let mut rows: Vec<SizeRow> = (1..=cfg.l).map(|l| SizeRow { l, samples: Vec::new() }).collect();
    for rep in 0..cfg.reps {
        let (a, _) = rep_assessment(cfg, rep, tol)?;
        for row in &mut rows {
            let sample = generator_sizes(&a.prefix(row.l), tol, Deadline::after(cfg.budget()))?;
            row.samples.push(sample);
        }
    }
    Ok(rows)
}

/// Sizes under maximality with an ε-contaminated linear expectation, for
/// every ε on the configured grid. Each repetition draws one pmf and `L`
/// option sets and reuses them across ε.
pub fn run_epsilon_experiment(cfg: &ExperimentConfig, tol: &ToleranceConfig) -> Result<Vec<EpsilonRow>, BenchError> {
    cfg.validate()?;
    let grid = cfg.epsilon.values();
    let mut rows: Vec<EpsilonRow> = grid.iter().map(|&epsilon| EpsilonRow { epsilon, samples: Vec::new() }).collect();
    for rep in 0..cfg.reps {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rep_seed(rep));
        let p = random_pmf(cfg.dim, &mut rng);
        let sets = (0..cfg.l)
            .map(|_| random_option_set(&mut rng, cfg.set_size, cfg.dim, (0.0, 1.0)))
            .collect::<choix::Result<Vec<_>>>()?;
        for row in &mut rows {
            let es = ESet::single(epsilon_contamination(&p, row.epsilon)?);
            let a = build_assessment(&es, &sets, tol)?;
            let sizes = generator_sizes(&a, tol, Deadline::after(cfg.budget()))?;
            row.samples.push(EpsilonSample {
                h_naive: assessment_to_conjunctive_naive(&a).len(),
                h_simpl: assessment_to_conjunctive(&a, tol)?.len(),
                g_naive: sizes.g_naive,
                g_conj: sizes.g_conj,
                g_full: sizes.g_full,
            });
        }
    }
    Ok(rows)
}

fn timed_build(a: &Assessment, method: Method, tol: &ToleranceConfig, deadline: Deadline) -> Result<(Option<f64>, Option<Pipeline>), BenchError> {
    let start = Instant::now();
    match Pipeline::build_until(a, method, tol, deadline) {
        Ok(p) => Ok((Some(start.elapsed().as_secs_f64()), Some(p))),
        Err(Error::DeadlineExceeded) => Ok((None, None)),
        Err(e) => Err(e.into()),
    }
}

/// Mean seconds per query, or `None` if the queries did not finish in time.
fn timed_choose(p: &Pipeline, queries: &[OptionSet], tol: &ToleranceConfig, deadline: Deadline) -> Result<Option<f64>, BenchError> {
    let start = Instant::now();
    for q in queries {
        match p.choose_until(q, tol, deadline) {
            Ok(_) => {}
            Err(Error::DeadlineExceeded) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Some(start.elapsed().as_secs_f64() / queries.len() as f64))
}

/// Build and choose times per method along the prefixes. Each method gets
/// its own budget per cell; absolute numbers are informational only.
pub fn run_timing_experiment(cfg: &ExperimentConfig, tol: &ToleranceConfig) -> Result<Vec<TimingRow>, BenchError> {
    cfg.validate()?;
    let mut rows: Vec<TimingRow> = (1..=cfg.l).map(|l| TimingRow { l, samples: Vec::new() }).collect();
    let mut warmed_up = false;
    for rep in 0..cfg.reps {
        let (a, mut rng) = rep_assessment(cfg, rep, tol)?;
        let queries = (0..cfg.queries)
            .map(|_| random_option_set(&mut rng, cfg.set_size, cfg.dim, (0.0, 1.0)))
            .collect::<choix::Result<Vec<_>>>()?;
        for row in &mut rows {
            let prefix = a.prefix(row.l);
            if !warmed_up {
                for m in Method::ALL {
                    if let (_, Some(p)) = timed_build(&prefix, m, tol, Deadline::after(cfg.budget()))? {
                        timed_choose(&p, &queries[..1], tol, Deadline::after(cfg.budget()))?;
                    }
                }
                warmed_up = true;
            }
            let mut sample = TimingSample { build: [None; 3], choose: [None; 3] };
            for (i, m) in Method::ALL.into_iter().enumerate() {
                let deadline = Deadline::after(cfg.budget());
                let (build, pipeline) = timed_build(&prefix, m, tol, deadline)?;
                sample.build[i] = build;
                if let Some(p) = pipeline {
                    sample.choose[i] = timed_choose(&p, &queries, tol, deadline)?;
                }
            }
            row.samples.push(sample);
        }
    }
    Ok(rows)
}

/// Number of queries after which the full method's extra build time pays
/// off: `(t_build_full − t_build_conj) / (t_choose_conj − t_choose_full)`.
/// `None` when the full method is not faster per query.
pub fn breakeven(build_conj: f64, build_full: f64, choose_conj: f64, choose_full: f64) -> Option<f64> {
    let gain = choose_conj - choose_full;
    (gain > 0.0).then(|| ((build_full - build_conj) / gain).max(0.0))
}
