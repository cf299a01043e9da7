//! Conjunctive and disjunctive generators, and their simplification.
//!
//! A conjunctive generator `ℋ` is a list of option sets `H`, each of which
//! must contain at least one desirable option. Its disjunctive generator
//! `𝒢(ℋ)` lists every way of picking one option from each `H`; a preference
//! order is compatible with the assessment iff it makes all options of some
//! selection `G ∈ 𝒢(ℋ)` desirable.
//!
//! `𝒢(ℋ)` has `∏|H|` members, so it is either streamed ([`DisjStream`]) or
//! built step by step with simplifications applied at every step
//! ([`conjunctive_to_disjunctive_simplified`]).

use num_bigint::BigUint;
use serde::Serialize;

use crate::deadline::Deadline;
use crate::error::Result;
use crate::feasibility::{g_ord, is_feasible, option_ord};
use crate::options::{is_nonpositive, is_positive, Assessment, OptionSet, OptionVec, ToleranceConfig};

/// A list of option sets, each required to contain a desirable option.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjGenerator {
    sets: Vec<OptionSet>,
    inconsistent: bool,
}

impl ConjGenerator {
    pub fn new(sets: Vec<OptionSet>) -> Self {
        Self { sets, inconsistent: false }
    }

    /// The canonical inconsistent generator `{∅}`.
    pub fn inconsistent() -> Self {
        Self { sets: vec![OptionSet::empty()], inconsistent: true }
    }

    pub fn sets(&self) -> &[OptionSet] {
        &self.sets
    }

    /// Set when simplification emptied one of the sets.
    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn stream(&self) -> DisjStream<'_> {
        DisjStream::new(self)
    }

    pub fn disjunctive_size(&self) -> BigUint {
        disjunctive_size(self)
    }
}

/// A materialised list of generator sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DisjGenerator {
    sets: Vec<OptionSet>,
}

impl DisjGenerator {
    pub fn new(sets: Vec<OptionSet>) -> Self {
        Self { sets }
    }

    /// `{∅}`, the generator of the empty assessment.
    pub fn vacuous() -> Self {
        Self { sets: vec![OptionSet::empty()] }
    }

    pub fn sets(&self) -> &[OptionSet] {
        &self.sets
    }

    pub fn into_sets(self) -> Vec<OptionSet> {
        self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Materialises every selection of a conjunctive generator.
    pub fn from_conjunctive(h: &ConjGenerator) -> Self {
        Self { sets: h.stream().collect() }
    }
}

/// Lazy iterator over the selection sets of a conjunctive generator.
///
/// Selections come in lexicographic order of the per-set indices, the last
/// set varying fastest.
#[derive(Debug, Clone)]
pub struct DisjStream<'a> {
    sets: &'a [OptionSet],
    index: Vec<usize>,
    done: bool,
}

impl<'a> DisjStream<'a> {
    pub fn new(h: &'a ConjGenerator) -> Self {
        Self::over(&h.sets)
    }

    pub fn over(sets: &'a [OptionSet]) -> Self {
        let done = sets.iter().any(|s| s.is_empty());
        Self { sets, index: vec![0; sets.len()], done }
    }
}

impl Iterator for DisjStream<'_> {
    type Item = OptionSet;

    fn next(&mut self) -> Option<OptionSet> {
        if self.done {
            return None;
        }
        let current: OptionSet = self.index.iter().zip(self.sets).map(|(&i, s)| s[i].clone()).collect();
        // odometer increment
        let mut k = self.sets.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.index[k] += 1;
            if self.index[k] < self.sets[k].len() {
                break;
            }
            self.index[k] = 0;
        }
        Some(current)
    }
}

/// `∏_{H∈ℋ} |H|`: 1 for the empty generator, 0 if some `H` is empty.
pub fn disjunctive_size(h: &ConjGenerator) -> BigUint {
    h.sets.iter().fold(BigUint::from(1u32), |acc, s| acc * BigUint::from(s.len()))
}

/// `ℋ_𝒜`: one set `V − w` per pair `(V, W)` and `w ∈ W`, without simplification.
pub fn assessment_to_conjunctive_naive(a: &Assessment) -> ConjGenerator {
    let mut sets = Vec::new();
    for pair in a.pairs() {
        for w in pair.rejected() {
            let h: OptionSet = pair.chosen().iter().map(|v| v.sub(w).expect("validated dimensions")).collect();
            sets.push(h);
        }
    }
    ConjGenerator::new(sets)
}

/// Builds the conjunctive generator with simplifications: sets containing a
/// positive option are dropped, nonpositive options are dropped, and each set
/// keeps only its `⊴`-maximal options. Returns `{∅}` flagged inconsistent as
/// soon as a set becomes empty.
pub fn assessment_to_conjunctive(a: &Assessment, cfg: &ToleranceConfig) -> Result<ConjGenerator> {
    let mut sets = Vec::new();
    for pair in a.pairs() {
        for w in pair.rejected() {
            let mut h = Vec::new();
            let mut contains_positive = false;
            for v in pair.chosen() {
                let d = v.sub(w)?;
                if is_positive(&d, cfg) {
                    contains_positive = true;
                    break;
                }
                if !is_nonpositive(&d, cfg) {
                    h.push(d);
                }
            }
            if contains_positive {
                continue;
            }
            if h.is_empty() {
                return Ok(ConjGenerator::inconsistent());
            }
            let kept = max_elements(h, |s, t| option_ord(s, t, cfg))?;
            sets.push(OptionSet::new(kept)?);
        }
    }
    Ok(ConjGenerator::new(sets))
}

/// Keeps one representative of every maximal equivalence class of a preorder.
///
/// `dominated(s, t)` must return true when `s` is dominated by `t`. The first
/// encountered member of each surviving class is kept, and survivors stay in
/// input order. Uses at most `n(n−1)` calls to `dominated`.
pub fn max_elements<T, E, F>(items: impl IntoIterator<Item = T>, mut dominated: F) -> std::result::Result<Vec<T>, E>
where
    F: FnMut(&T, &T) -> std::result::Result<bool, E>,
{
    let mut maximal: Vec<T> = Vec::new();
    for s in items {
        let mut is_maximal = true;
        for t in &maximal {
            if dominated(&s, t)? {
                is_maximal = false;
                break;
            }
        }
        if !is_maximal {
            continue;
        }
        let mut kept = Vec::with_capacity(maximal.len() + 1);
        for t in maximal {
            if !dominated(&t, &s)? {
                kept.push(t);
            }
        }
        kept.push(s);
        maximal = kept;
    }
    Ok(maximal)
}

/// A subset `G′ ⊆ G` with `𝒩(G′) = 𝒩(G)` from which no option can be removed
/// without shrinking `𝒩`.
///
/// Scans in index order and drops `u` whenever it is positive or lies in the
/// cone of the remaining options. A single pass suffices: an option that was
/// not redundant stays non-redundant when others are removed.
///
/// Callers must ensure `0 ∉ 𝒩(G)`.
pub fn min_cone_subset(g: &OptionSet, cfg: &ToleranceConfig) -> Result<OptionSet> {
    let mut items: Vec<OptionVec> = g.items().to_vec();
    let mut i = 0;
    while i < items.len() {
        let removable = is_positive(&items[i], cfg) || {
            let u = items.remove(i);
            let inside = is_feasible(&items, &u, cfg)?;
            items.insert(i, u);
            inside
        };
        if removable {
            items.remove(i);
        } else {
            i += 1;
        }
    }
    OptionSet::new(items)
}

/// Drops inconsistent sets, minimises the rest and keeps the `⪯`-maximal ones.
pub fn simplify_disjunctive(g: &DisjGenerator, cfg: &ToleranceConfig) -> Result<DisjGenerator> {
    let mut kept = Vec::new();
    for set in g.sets() {
        let zero = OptionVec::zeros(set.dim().unwrap_or(1));
        if set.is_empty() || !is_feasible(set, &zero, cfg)? {
            kept.push(min_cone_subset(set, cfg)?);
        }
    }
    Ok(DisjGenerator::new(max_elements(kept, |a, b| g_ord(a, b, cfg))?))
}

/// Builds a simplified disjunctive generator equivalent to `𝒢(ℋ)` one
/// conjunctive set at a time, never materialising `𝒢(ℋ)` itself.
pub fn conjunctive_to_disjunctive_simplified(h: &ConjGenerator, cfg: &ToleranceConfig) -> Result<DisjGenerator> {
    conjunctive_to_disjunctive_simplified_until(h, cfg, Deadline::none())
}

/// As [`conjunctive_to_disjunctive_simplified`], giving up with
/// [`crate::Error::DeadlineExceeded`] once `deadline` passes.
pub fn conjunctive_to_disjunctive_simplified_until(
    h: &ConjGenerator,
    cfg: &ToleranceConfig,
    deadline: Deadline,
) -> Result<DisjGenerator> {
    let mut current: Vec<OptionSet> = vec![OptionSet::empty()];
    for set in h.sets() {
        let mut candidates = Vec::new();
        for g in &current {
            for option in set {
                deadline.check()?;
                let extended = g.with(option.clone())?;
                let zero = OptionVec::zeros(option.dim());
                if !is_feasible(&extended, &zero, cfg)? {
                    candidates.push(min_cone_subset(&extended, cfg)?);
                }
            }
        }
        current = max_elements(candidates, |a, b| {
            deadline.check()?;
            g_ord(a, b, cfg)
        })?;
    }
    Ok(DisjGenerator::new(current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::oracle::fm_oracle;
    use crate::options::AssessmentPair;
    use std::cell::Cell;

    const CFG: ToleranceConfig = ToleranceConfig { tau: 0.0, lp_tol: 1e-9 };

    fn set(rows: &[&[f64]]) -> OptionSet {
        OptionSet::from_rows(rows)
    }

    fn v(xs: &[f64]) -> OptionVec {
        OptionVec::new(xs.to_vec()).unwrap()
    }

    fn running_example() -> Assessment {
        let p1 = AssessmentPair::new(set(&[&[5., -3.], &[3., -2.]]), set(&[&[1., -1.], &[-2., 1.]])).unwrap();
        let p2 = AssessmentPair::new(set(&[&[-4., 8.]]), set(&[&[3., 1.]])).unwrap();
        Assessment::new(2, vec![p1, p2]).unwrap()
    }

    fn single_pair(chosen: &[&[f64]], rejected: &[&[f64]]) -> Assessment {
        Assessment::new(2, vec![AssessmentPair::new(set(chosen), set(rejected)).unwrap()]).unwrap()
    }

    /// `a` and `b` generate the same cone.
    fn same_cone(a: &OptionSet, b: &OptionSet) -> bool {
        g_ord(a, b, &CFG).unwrap() && g_ord(b, a, &CFG).unwrap()
    }

    #[test]
    fn naive_conjunctive() {
        let h = assessment_to_conjunctive_naive(&running_example());
        assert_eq!(
            h.sets(),
            &[set(&[&[4., -2.], &[2., -1.]]), set(&[&[7., -4.], &[5., -3.]]), set(&[&[-7., 7.]])]
        );
        assert!(assessment_to_conjunctive_naive(&Assessment::empty(2).unwrap()).is_empty());
        let uninformative = Assessment::new(2, vec![AssessmentPair::new(set(&[&[1., 1.]]), OptionSet::empty()).unwrap()]).unwrap();
        assert!(assessment_to_conjunctive_naive(&uninformative).is_empty());
    }

    #[test]
    fn simplified_conjunctive() {
        let h = assessment_to_conjunctive(&running_example(), &CFG).unwrap();
        assert!(!h.is_inconsistent());
        assert_eq!(h.sets(), &[set(&[&[4., -2.]]), set(&[&[7., -4.]]), set(&[&[-7., 7.]])]);
        // the kept representative is equivalent to the one chosen by hand, (2,-1)
        assert!(option_ord(&v(&[4., -2.]), &v(&[2., -1.]), &CFG).unwrap());
        assert!(option_ord(&v(&[2., -1.]), &v(&[4., -2.]), &CFG).unwrap());

        let inconsistent = assessment_to_conjunctive(&single_pair(&[&[0., 0.]], &[&[1., 1.]]), &CFG).unwrap();
        assert!(inconsistent.is_inconsistent());
        assert_eq!(inconsistent.sets(), &[OptionSet::empty()]);

        let positive = assessment_to_conjunctive(&single_pair(&[&[0., 2.]], &[&[0., 1.]]), &CFG).unwrap();
        assert!(positive.is_empty());
        assert!(!positive.is_inconsistent());
    }

    #[test]
    fn stream_and_size() {
        let h = assessment_to_conjunctive_naive(&running_example());
        let (h1, h2, h3, h4, h5) = (v(&[4., -2.]), v(&[2., -1.]), v(&[7., -4.]), v(&[5., -3.]), v(&[-7., 7.]));
        let all: Vec<OptionSet> = h.stream().collect();
        let expect = vec![
            OptionSet::new(vec![h1.clone(), h3.clone(), h5.clone()]).unwrap(),
            OptionSet::new(vec![h1, h4.clone(), h5.clone()]).unwrap(),
            OptionSet::new(vec![h2.clone(), h3, h5.clone()]).unwrap(),
            OptionSet::new(vec![h2, h4, h5]).unwrap(),
        ];
        assert_eq!(all, expect);
        assert_eq!(disjunctive_size(&h), BigUint::from(4u32));

        let empty = ConjGenerator::new(vec![]);
        assert_eq!(empty.stream().collect::<Vec<_>>(), vec![OptionSet::empty()]);
        assert_eq!(disjunctive_size(&empty), BigUint::from(1u32));

        let with_hole = ConjGenerator::new(vec![set(&[&[1., 0.], &[0., 1.]]), OptionSet::empty()]);
        assert_eq!(with_hole.stream().count(), 0);
        assert_eq!(disjunctive_size(&with_hole), BigUint::from(0u32));
    }

    #[test]
    fn max_elements_examples() {
        let out = max_elements(vec![v(&[7., -4.]), v(&[5., -3.])], |s, t| option_ord(s, t, &CFG)).unwrap();
        assert_eq!(out, vec![v(&[7., -4.])]);
        // mutual domination, confirmed exactly; first encountered survives
        assert!(fm_oracle(&[v(&[4., -2.])], &v(&[2., -1.])).unwrap());
        assert!(fm_oracle(&[v(&[2., -1.])], &v(&[4., -2.])).unwrap());
        let out = max_elements(vec![v(&[4., -2.]), v(&[2., -1.])], |s, t| option_ord(s, t, &CFG)).unwrap();
        assert_eq!(out, vec![v(&[4., -2.])]);
        let out: Vec<i32> = max_elements(vec![3, 1, 2], |_, _| Ok::<_, ()>(false)).unwrap();
        assert_eq!(out, vec![3, 1, 2]);
    }

    #[test]
    fn max_elements_integer_preorder() {
        // divisibility-free preorder on integers by value: s dominated by t iff s <= t
        let calls = Cell::new(0usize);
        let items = vec![5, 3, 9, 9, 1, 7];
        let out = max_elements(items.clone(), |s, t| {
            calls.set(calls.get() + 1);
            Ok::<_, ()>(s <= t)
        })
        .unwrap();
        assert_eq!(out, vec![9]);
        assert!(calls.get() <= items.len() * (items.len() - 1));
    }

    #[test]
    fn min_cone_subset_examples() {
        let g = set(&[&[2., -1.], &[7., -4.], &[-7., 7.]]);
        assert_eq!(min_cone_subset(&g, &CFG).unwrap(), set(&[&[7., -4.], &[-7., 7.]]));
        assert_eq!(min_cone_subset(&set(&[&[7., -4.]]), &CFG).unwrap(), set(&[&[7., -4.]]));
        let scaled = set(&[&[7., -4.], &[14., -8.]]);
        let out = min_cone_subset(&scaled, &CFG).unwrap();
        assert_eq!(out.len(), 1);
        // both singletons generate the same cone, checked exactly
        for probe in [&[7., -4.], &[14., -8.], &[1., -1.], &[10., -5.]] {
            let p = v(probe);
            assert_eq!(fm_oracle(&out, &p).unwrap(), fm_oracle(&scaled, &p).unwrap());
        }
        assert!(min_cone_subset(&OptionSet::empty(), &CFG).unwrap().is_empty());
    }

    #[test]
    fn simplify_examples() {
        let g = DisjGenerator::new(vec![set(&[&[2., -1.], &[7., -4.], &[-7., 7.]])]);
        let out = simplify_disjunctive(&g, &CFG).unwrap();
        assert_eq!(out.len(), 1);
        assert!(same_cone(&out.sets()[0], &set(&[&[7., -4.], &[-7., 7.]])));

        // (-1,0) + (1,0) = 0 ≤ 0
        assert!(fm_oracle(&set(&[&[-1., 0.], &[1., 0.]]), &v(&[0., 0.])).unwrap());
        let out = simplify_disjunctive(&DisjGenerator::new(vec![set(&[&[-1., 0.], &[1., 0.]])]), &CFG).unwrap();
        assert!(out.is_empty());

        assert_eq!(simplify_disjunctive(&DisjGenerator::vacuous(), &CFG).unwrap(), DisjGenerator::vacuous());
    }

    #[test]
    fn simplified_disjunctive_examples() {
        let h = ConjGenerator::new(vec![set(&[&[2., -1.]]), set(&[&[7., -4.]]), set(&[&[-7., 7.]])]);
        let out = conjunctive_to_disjunctive_simplified(&h, &CFG).unwrap();
        assert_eq!(out.len(), 1);
        assert!(same_cone(&out.sets()[0], &set(&[&[7., -4.], &[-7., 7.]])));

        let empty = conjunctive_to_disjunctive_simplified(&ConjGenerator::new(vec![]), &CFG).unwrap();
        assert_eq!(empty, DisjGenerator::vacuous());

        assert!(fm_oracle(&set(&[&[-1., -1.]]), &v(&[0., 0.])).unwrap());
        let out = conjunctive_to_disjunctive_simplified(&ConjGenerator::new(vec![set(&[&[-1., -1.]])]), &CFG).unwrap();
        assert!(out.is_empty());

        let out = conjunctive_to_disjunctive_simplified(&ConjGenerator::inconsistent(), &CFG).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn deadline_interrupts_construction() {
        let h = assessment_to_conjunctive_naive(&running_example());
        let past = Deadline::at(std::time::Instant::now() - std::time::Duration::from_secs(1));
        assert_eq!(
            conjunctive_to_disjunctive_simplified_until(&h, &CFG, past),
            Err(crate::Error::DeadlineExceeded)
        );
    }

    #[test]
    fn simplified_pipeline_preserves_cone_family() {
        // Alg. 6 + Alg. 8 versus simplification of the full naive generator
        let a = running_example();
        let via_stream = simplify_disjunctive(&DisjGenerator::from_conjunctive(&assessment_to_conjunctive_naive(&a)), &CFG).unwrap();
        let via_steps = conjunctive_to_disjunctive_simplified(&assessment_to_conjunctive(&a, &CFG).unwrap(), &CFG).unwrap();
        assert_eq!(via_stream.len(), via_steps.len());
        for (x, y) in via_stream.sets().iter().zip(via_steps.sets()) {
            assert!(same_cone(x, y));
        }
    }
}
