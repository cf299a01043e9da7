//! Consistency checks and natural-extension choice over a disjunctive generator.

use std::borrow::{Borrow, Cow};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::feasibility::is_feasible;
use crate::generators::{
    assessment_to_conjunctive, assessment_to_conjunctive_naive, conjunctive_to_disjunctive_simplified_until,
    ConjGenerator, DisjGenerator, DisjStream,
};
use crate::options::{is_positive, Assessment, OptionSet, OptionVec, ToleranceConfig};

/// How the disjunctive generator is obtained from an assessment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Unsimplified conjunctive generator, selections streamed.
    #[serde(rename = "naive")]
    Naive,
    /// Simplified conjunctive generator, selections streamed.
    #[serde(rename = "conj")]
    Conjunctive,
    /// Simplified conjunctive generator, disjunctive generator built with
    /// simplification at every step and kept in memory.
    #[serde(rename = "full")]
    Full,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Naive, Method::Conjunctive, Method::Full];

    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Conjunctive => "conj",
            Method::Full => "full",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "conj" => Ok(Method::Conjunctive),
            "full" => Ok(Method::Full),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}, expected naive, conj or full"))),
        }
    }
}

/// Split of a query set into chosen and rejected options.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChoiceResult {
    pub chosen: OptionSet,
    pub rejected: OptionSet,
    pub consistent: bool,
}

/// True iff some yielded set `G` has `0 ∉ 𝒩(G)`. Stops at the first such set.
pub fn is_consistent_generator<I>(gs: I, cfg: &ToleranceConfig) -> Result<bool>
where
    I: IntoIterator,
    I::Item: Borrow<OptionSet>,
{
    for g in gs {
        let g = g.borrow();
        let zero = OptionVec::zeros(g.dim().unwrap_or(1));
        if !is_feasible(g, &zero, cfg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Decides `u ∈ C(A)` for the choice function generated by `gs`.
///
/// `u` is rejected outright when some `v − u` is positive. Otherwise it is
/// chosen iff some `G` keeps every `v − u` (including `0`) outside `𝒩(G)`.
pub fn is_chosen<I>(a: &OptionSet, u: &OptionVec, gs: I, cfg: &ToleranceConfig) -> Result<bool>
where
    I: IntoIterator,
    I::Item: Borrow<OptionSet>,
{
    a.check_dim(u.dim())?;
    let diffs = differences(a, u)?;
    if diffs.iter().any(|d| is_positive(d, cfg)) {
        return Ok(false);
    }
    for g in gs {
        if separates(g.borrow(), &diffs, cfg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn differences(a: &OptionSet, u: &OptionVec) -> Result<Vec<OptionVec>> {
    let mut out: Vec<OptionVec> = Vec::with_capacity(a.len());
    for v in a {
        let d = v.sub(u)?;
        if !out.contains(&d) {
            out.push(d);
        }
    }
    Ok(out)
}

/// No `d` lies in the cone of `g`.
fn separates(g: &OptionSet, diffs: &[OptionVec], cfg: &ToleranceConfig) -> Result<bool> {
    for d in diffs {
        if is_feasible(g, d, cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A generator ready to answer queries.
#[derive(Debug, Clone)]
pub enum Pipeline {
    /// A conjunctive generator whose selections are enumerated per query.
    Lazy { method: Method, generator: ConjGenerator },
    Materialized(DisjGenerator),
}

/// Sets yielded by [`Pipeline::sets`].
pub enum PipelineSets<'a> {
    Stream(DisjStream<'a>),
    Slice(std::slice::Iter<'a, OptionSet>),
}

impl<'a> Iterator for PipelineSets<'a> {
    type Item = Cow<'a, OptionSet>;

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            PipelineSets::Stream(s) => s.next().map(Cow::Owned),
            PipelineSets::Slice(s) => s.next().map(Cow::Borrowed),
        }
    }
}

impl Pipeline {
    pub fn build(a: &Assessment, method: Method, cfg: &ToleranceConfig) -> Result<Self> {
        Self::build_until(a, method, cfg, Deadline::none())
    }

    /// Only the `Full` construction observes the deadline; the lazy pipelines
    /// are cheap to build.
    pub fn build_until(a: &Assessment, method: Method, cfg: &ToleranceConfig, deadline: Deadline) -> Result<Self> {
        Ok(match method {
            Method::Naive => Pipeline::Lazy { method, generator: assessment_to_conjunctive_naive(a) },
            Method::Conjunctive => Pipeline::Lazy { method, generator: assessment_to_conjunctive(a, cfg)? },
            Method::Full => {
                let h = assessment_to_conjunctive(a, cfg)?;
                Pipeline::Materialized(conjunctive_to_disjunctive_simplified_until(&h, cfg, deadline)?)
            }
        })
    }

    pub fn method(&self) -> Method {
        match self {
            Pipeline::Lazy { method, .. } => *method,
            Pipeline::Materialized(_) => Method::Full,
        }
    }

    /// True when simplification already proved the assessment inconsistent.
    pub fn flagged_inconsistent(&self) -> bool {
        matches!(self, Pipeline::Lazy { generator, .. } if generator.is_inconsistent())
    }

    pub fn sets(&self) -> PipelineSets<'_> {
        match self {
            Pipeline::Lazy { generator, .. } => PipelineSets::Stream(generator.stream()),
            Pipeline::Materialized(g) => PipelineSets::Slice(g.sets().iter()),
        }
    }

    pub fn is_consistent(&self, cfg: &ToleranceConfig) -> Result<bool> {
        self.is_consistent_until(cfg, Deadline::none())
    }

    pub fn is_consistent_until(&self, cfg: &ToleranceConfig, deadline: Deadline) -> Result<bool> {
        if self.flagged_inconsistent() {
            return Ok(false);
        }
        for g in self.sets() {
            deadline.check()?;
            let zero = OptionVec::zeros(g.dim().unwrap_or(1));
            if !is_feasible(&g, &zero, cfg)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn choose(&self, query: &OptionSet, cfg: &ToleranceConfig) -> Result<ChoiceResult> {
        self.choose_until(query, cfg, Deadline::none())
    }

    /// Consistency and every decision in a single pass over the generator.
    ///
    /// Each yielded `G` is tested once for `0 ∈ 𝒩(G)`; if it passes, it is
    /// offered to every option not yet known to be chosen. The pass ends as
    /// soon as all options are chosen. The outcome equals running
    /// [`is_consistent_generator`] and [`is_chosen`] separately.
    pub fn choose_until(&self, query: &OptionSet, cfg: &ToleranceConfig, deadline: Deadline) -> Result<ChoiceResult> {
        if query.is_empty() {
            return Err(Error::InvalidArgument("query set must be nonempty".into()));
        }
        let dim = query[0].dim();
        query.check_dim(dim)?;

        // one decision per distinct value
        let mut distinct: Vec<&OptionVec> = Vec::new();
        for u in query {
            if !distinct.contains(&u) {
                distinct.push(u);
            }
        }
        let mut pending: Vec<(usize, Vec<OptionVec>)> = Vec::new();
        for (i, u) in distinct.iter().enumerate() {
            let mut diffs = differences(query, u)?;
            if !diffs.iter().any(|d| is_positive(d, cfg)) {
                // `0` is handled by the consistency test on each `G`
                diffs.retain(|d| !d.is_zero());
                pending.push((i, diffs));
            }
        }
        let mut chosen_flags = vec![false; distinct.len()];
        let mut consistent = false;
        if !self.flagged_inconsistent() {
            for g in self.sets() {
                deadline.check()?;
                if let Some(gd) = g.dim() {
                    if gd != dim {
                        return Err(Error::DimensionMismatch { expected: gd, found: dim });
                    }
                }
                if is_feasible(&g, &OptionVec::zeros(dim), cfg)? {
                    continue;
                }
                consistent = true;
                let mut still = Vec::with_capacity(pending.len());
                for (i, diffs) in pending {
                    if separates(&g, &diffs, cfg)? {
                        chosen_flags[i] = true;
                    } else {
                        still.push((i, diffs));
                    }
                }
                pending = still;
                if pending.is_empty() {
                    break;
                }
            }
        }

        let mut chosen = Vec::new();
        let mut rejected = Vec::new();
        for u in query {
            let idx = distinct.iter().position(|d| *d == u).expect("every option is listed");
            if consistent && chosen_flags[idx] {
                chosen.push(u.clone());
            } else {
                rejected.push(u.clone());
            }
        }
        Ok(ChoiceResult { chosen: OptionSet::new(chosen)?, rejected: OptionSet::new(rejected)?, consistent })
    }
}

/// `C_𝒜(A)` computed through the given method.
pub fn natural_extension(query: &OptionSet, a: &Assessment, method: Method, cfg: &ToleranceConfig) -> Result<ChoiceResult> {
    query.check_dim(a.dimension())?;
    Pipeline::build(a, method, cfg)?.choose(query, cfg)
}

/// Whether some coherent choice function agrees with `a`.
pub fn check_consistency(a: &Assessment, method: Method, cfg: &ToleranceConfig) -> Result<bool> {
    Pipeline::build(a, method, cfg)?.is_consistent(cfg)
}

/// Exact identity of an assessment and tolerance settings, used as a cache key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint(Vec<u64>);

impl Fingerprint {
    pub fn of(a: &Assessment, method: Method, cfg: &ToleranceConfig) -> Self {
        let mut words = vec![method as u64, cfg.tau.to_bits(), cfg.lp_tol.to_bits(), a.dimension() as u64];
        for pair in a.pairs() {
            for set in [pair.chosen(), pair.rejected()] {
                words.push(set.len() as u64);
                for v in set {
                    words.extend(v.values().iter().map(|x| x.to_bits()));
                }
            }
        }
        Fingerprint(words)
    }
}

/// Memoises built pipelines so repeated queries against the same assessment
/// skip the construction.
#[derive(Debug, Default)]
pub struct PipelineCache {
    entries: HashMap<Fingerprint, Arc<Pipeline>>,
}

impl PipelineCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(&mut self, a: &Assessment, method: Method, cfg: &ToleranceConfig) -> Result<Arc<Pipeline>> {
        let key = Fingerprint::of(a, method, cfg);
        if let Some(p) = self.entries.get(&key) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(Pipeline::build(a, method, cfg)?);
        self.entries.insert(key, Arc::clone(&p));
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }
}
