//! Choice functions induced by sets of lower expectations, and random
//! generators for them.
//!
//! A lower expectation is represented by the finitely many extreme points of
//! its credal set. Given a set `𝓔` of lower expectations, an option `u ∈ A`
//! is chosen when some `E̲ ∈ 𝓔` has `E̲(v − u) ≤ 0` for every `v ∈ A` and no
//! `v ∈ A` strictly dominates `u`. Ties at exactly zero count as chosen.
//!
//! Random probability mass functions are drawn uniformly from the simplex
//! (a flat Dirichlet distribution, sampled as normalised exponentials).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::options::{check_dim, strictly_less, Assessment, AssessmentPair, OptionSet, OptionVec, ToleranceConfig};

const PMF_SUM_TOL: f64 = 1e-12;

/// A probability mass function on a finite state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf(Vec<f64>);

impl Pmf {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(&x) = probabilities.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidArgument(format!("probability {x} is not a finite nonnegative number")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PMF_SUM_TOL {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self(probabilities))
    }

    /// The degenerate pmf concentrated on state `x`.
    pub fn degenerate(dim: usize, x: usize) -> Self {
        assert!(x < dim, "state {x} out of range for dimension {dim}");
        let mut p = vec![0.0; dim];
        p[x] = 1.0;
        Self(p)
    }

    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self(vec![1.0 / dim as f64; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.0
    }
}

/// A lower expectation, given by the extreme points of its credal set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CredalSet {
    extremes: Vec<Pmf>,
}

impl CredalSet {
    pub fn new(extremes: Vec<Pmf>) -> Result<Self> {
        let first = extremes.first().ok_or_else(|| Error::InvalidArgument("a credal set needs an extreme point".into()))?;
        let dim = first.dim();
        for p in &extremes {
            check_dim(dim, p.dim())?;
        }
        Ok(Self { extremes })
    }

    /// A linear expectation.
    pub fn linear(p: Pmf) -> Self {
        Self { extremes: vec![p] }
    }

    pub fn extremes(&self) -> &[Pmf] {
        &self.extremes
    }

    pub fn dim(&self) -> usize {
        self.extremes[0].dim()
    }
}

/// A set of lower expectations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ESet {
    members: Vec<CredalSet>,
}

impl ESet {
    pub fn new(members: Vec<CredalSet>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::InvalidArgument("a set of lower expectations cannot be empty".into()))?;
        let dim = first.dim();
        for m in &members {
            check_dim(dim, m.dim())?;
        }
        Ok(Self { members })
    }

    pub fn single(member: CredalSet) -> Self {
        Self { members: vec![member] }
    }

    pub fn members(&self) -> &[CredalSet] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }
}

/// The four kinds of random ground-truth models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// One linear expectation.
    Lin,
    /// One lower expectation.
    Max,
    /// Three linear expectations.
    Adm,
    /// Three lower expectations.
    Imp,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Lin, ModelKind::Max, ModelKind::Adm, ModelKind::Imp];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lin => "lin",
            ModelKind::Max => "max",
            ModelKind::Adm => "adm",
            ModelKind::Imp => "imp",
        }
    }

    /// Number of lower expectations in the set.
    pub fn members(self) -> usize {
        match self {
            ModelKind::Lin | ModelKind::Max => 1,
            ModelKind::Adm | ModelKind::Imp => 3,
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(self, ModelKind::Lin | ModelKind::Adm)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown model {s:?}, expected lin, max, adm or imp")))
    }
}

/// `𝔼_p(u) = Σ p(x) u(x)`.
pub fn expectation(p: &Pmf, u: &OptionVec) -> Result<f64> {
    u.dot(p.probabilities())
}

/// Minimum of the expectation over the extreme points.
pub fn lower_expectation(credal: &CredalSet, u: &OptionVec) -> Result<f64> {
    let mut low = f64::INFINITY;
    for p in credal.extremes() {
        low = low.min(expectation(p, u)?);
    }
    Ok(low)
}

/// Options of `a` chosen by the set of lower expectations `es`.
pub fn choose_by_eset(es: &ESet, a: &OptionSet, cfg: &ToleranceConfig) -> Result<OptionSet> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("query set must be nonempty".into()));
    }
    a.check_dim(es.dim())?;
    let mut chosen = Vec::new();
    'options: for u in a {
        for v in a {
            if strictly_less(u, v, cfg)? {
                continue 'options;
            }
        }
        for credal in es.members() {
            let mut undominated = true;
            for v in a {
                if lower_expectation(credal, &v.sub(u)?)? > 0.0 {
                    undominated = false;
                    break;
                }
            }
            if undominated {
                chosen.push(u.clone());
                continue 'options;
            }
        }
    }
    OptionSet::new(chosen)
}

/// Extreme points `(1−ε)p + ε𝕀_x` of the ε-contamination of `p`, one per state.
pub fn epsilon_contamination(p: &Pmf, eps: f64) -> Result<CredalSet> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("contamination level {eps} outside [0, 1]")));
    }
    if eps == 0.0 {
        return Ok(CredalSet::linear(p.clone()));
    }
    let dim = p.dim();
    let extremes = (0..dim)
        .map(|x| {
            let mut q: Vec<f64> = p.probabilities().iter().map(|pi| (1.0 - eps) * pi).collect();
            q[x] += eps;
            Pmf(q)
        })
        .collect();
    Ok(CredalSet { extremes })
}

/// A pmf drawn uniformly from the probability simplex.
pub fn random_pmf<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Pmf {
    assert!(dim > 0, "dimension must be positive");
    if dim == 1 {
        return Pmf(vec![1.0]);
    }
    let draws: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    let mut p: Vec<f64> = draws.iter().map(|x| x / total).collect();
    // push rounding error into the largest entry so the sum is 1 to within an ulp
    let rest: f64 = p.iter().sum::<f64>() - 1.0;
    let (imax, _) = p.iter().enumerate().fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
    p[imax] = (p[imax] - rest).max(0.0);
    Pmf(p)
}

/// A random model of the given kind; every lower expectation gets
/// `extremes_per_lowerexp` random extreme points.
pub fn random_eset<R: Rng + ?Sized>(kind: ModelKind, dim: usize, extremes_per_lowerexp: usize, rng: &mut R) -> Result<ESet> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if extremes_per_lowerexp == 0 {
        return Err(Error::InvalidArgument("a lower expectation needs at least one extreme point".into()));
    }
    let per = if kind.is_linear() { 1 } else { extremes_per_lowerexp };
    let members = (0..kind.members())
        .map(|_| CredalSet { extremes: (0..per).map(|_| random_pmf(dim, rng)).collect() })
        .collect();
    Ok(ESet { members })
}

/// The pairs `(C(A_ℓ), A_ℓ ∖ C(A_ℓ))` for the choice function of `es`.
pub fn build_assessment(es: &ESet, sets: &[OptionSet], cfg: &ToleranceConfig) -> Result<Assessment> {
    let mut pairs = Vec::with_capacity(sets.len());
    for a in sets {
        let chosen = choose_by_eset(es, a, cfg)?;
        let rejected: OptionSet = a.iter().filter(|u| !chosen.contains(u)).cloned().collect();
        pairs.push(AssessmentPair::new(chosen, rejected)?);
    }
    Assessment::new(es.dim(), pairs)
}

/// A set whose size is uniform on `count_range` (inclusive) and whose entries
/// are uniform on `[cube.0, cube.1)`.
pub fn random_option_set<R: Rng + ?Sized>(
    rng: &mut R,
    count_range: (usize, usize),
    dim: usize,
    cube: (f64, f64),
) -> Result<OptionSet> {
    let (lo, hi) = count_range;
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!("invalid set size range [{lo}, {hi}]")));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(cube.0.is_finite() && cube.1.is_finite() && cube.0 < cube.1) {
        return Err(Error::InvalidArgument(format!("invalid cube [{}, {}]", cube.0, cube.1)));
    }
    let n = rng.random_range(lo..=hi);
    let items = (0..n)
        .map(|_| OptionVec::new((0..dim).map(|_| rng.random_range(cube.0..cube.1)).collect()))
        .collect::<Result<Vec<_>>>()?;
    OptionSet::new(items)
}

/// Shape of a random assessment: the ground-truth model and the option sets
/// it is queried on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssessmentShape {
    pub kind: ModelKind,
    pub dim: usize,
    pub pairs: usize,
    pub extremes_per_lowerexp: usize,
    pub set_size: (usize, usize),
}

impl AssessmentShape {
    pub fn new(kind: ModelKind, pairs: usize) -> Self {
        Self { kind, dim: 4, pairs, extremes_per_lowerexp: 4, set_size: (2, 8) }
    }
}

/// Draws a model, then `shape.pairs` option sets from the unit cube, and
/// records the model's choices on them.
pub fn random_assessment<R: Rng + ?Sized>(shape: &AssessmentShape, rng: &mut R, cfg: &ToleranceConfig) -> Result<(ESet, Assessment)> {
    let es = random_eset(shape.kind, shape.dim, shape.extremes_per_lowerexp, rng)?;
    let sets = (0..shape.pairs)
        .map(|_| random_option_set(rng, shape.set_size, shape.dim, (0.0, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    let a = build_assessment(&es, &sets, cfg)?;
    Ok((es, a))
}
