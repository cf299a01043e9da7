#![allow(dead_code)]

use choix::models::{random_assessment, random_option_set, AssessmentShape, ModelKind};
use choix::{Assessment, OptionSet, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CFG: ToleranceConfig = ToleranceConfig { tau: 0.0, lp_tol: 1e-9 };

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A consistent assessment drawn from a random model of the given kind.
pub fn assessment(kind: ModelKind, pairs: usize, rng: &mut ChaCha8Rng) -> Assessment {
    random_assessment(&AssessmentShape::new(kind, pairs), rng, &CFG).unwrap().1
}

pub fn query(rng: &mut ChaCha8Rng) -> OptionSet {
    random_option_set(rng, (2, 8), 4, (0.0, 1.0)).unwrap()
}

pub fn kind_from(index: u64) -> ModelKind {
    ModelKind::ALL[(index % 4) as usize]
}
