//! Options, option sets and assessments, together with the componentwise
//! vector order they are compared by.
//!
//! An option is a utility vector indexed by the states of an uncertain
//! variable. Option sets are kept as ordered arrays: duplicates are allowed
//! and every algorithm iterates them in input order.

use std::fmt;
use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison slack used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Slack for componentwise comparisons between options.
    pub tau: f64,
    /// Extra feasibility slack granted to the LP layer.
    pub lp_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { tau: 0.0, lp_tol: 1e-9 }
    }
}

impl ToleranceConfig {
    pub fn new(tau: f64, lp_tol: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("tau must be a finite nonnegative number, got {tau}")));
        }
        if !(lp_tol >= 0.0 && lp_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("lp_tol must be a finite nonnegative number, got {lp_tol}")));
        }
        Ok(Self { tau, lp_tol })
    }
}

/// A single option: one finite utility per state.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OptionVec(Vec<f64>);

impl OptionVec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(&bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self(values))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "option dimension must be at least one");
        Self(vec![0.0; dim])
    }

    /// The unit vector that is one in state `index` and zero elsewhere.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn check_dim(&self, other: &OptionVec) -> Result<()> {
        check_dim(self.dim(), other.dim())
    }

    pub fn sub(&self, other: &OptionVec) -> Result<OptionVec> {
        self.check_dim(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn add(&self, other: &OptionVec) -> Result<OptionVec> {
        self.check_dim(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn scale(&self, factor: f64) -> OptionVec {
        Self(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn negate(&self) -> OptionVec {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn dot(&self, weights: &[f64]) -> Result<f64> {
        check_dim(self.dim(), weights.len())?;
        Ok(self.0.iter().zip(weights).map(|(a, b)| a * b).sum())
    }

    pub fn min_component(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `scale * self + shift`, the affine map used for rescaling assessments.
    pub(crate) fn affine(&self, scale: f64, shift: &OptionVec) -> Result<OptionVec> {
        self.check_dim(shift)?;
        Ok(Self(self.0.iter().zip(&shift.0).map(|(a, s)| scale * a + s).collect()))
    }
}

impl TryFrom<Vec<f64>> for OptionVec {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<OptionVec> for Vec<f64> {
    fn from(v: OptionVec) -> Self {
        v.0
    }
}

impl Index<usize> for OptionVec {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for OptionVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `u ≤ v` componentwise, with `tau` slack.
pub fn leq(u: &OptionVec, v: &OptionVec, cfg: &ToleranceConfig) -> Result<bool> {
    u.check_dim(v)?;
    Ok(leq_unchecked(u.values(), v.values(), cfg.tau))
}

/// `u < v`: `u ≤ v` and some component of `v` exceeds that of `u` by more than `tau`.
pub fn strictly_less(u: &OptionVec, v: &OptionVec, cfg: &ToleranceConfig) -> Result<bool> {
    u.check_dim(v)?;
    Ok(strictly_less_unchecked(u.values(), v.values(), cfg.tau))
}

pub(crate) fn leq_unchecked(u: &[f64], v: &[f64], tau: f64) -> bool {
    u.iter().zip(v).all(|(a, b)| *a <= *b + tau)
}

pub(crate) fn strictly_less_unchecked(u: &[f64], v: &[f64], tau: f64) -> bool {
    leq_unchecked(u, v, tau) && u.iter().zip(v).any(|(a, b)| b - a > tau)
}

/// `0 < v`: the option is positive, hence desirable under every coherent order.
pub fn is_positive(v: &OptionVec, cfg: &ToleranceConfig) -> bool {
    v.values().iter().all(|&x| x >= -cfg.tau) && v.values().iter().any(|&x| x > cfg.tau)
}

/// `v ≤ 0` componentwise.
pub fn is_nonpositive(v: &OptionVec, cfg: &ToleranceConfig) -> bool {
    v.values().iter().all(|&x| x <= cfg.tau)
}

/// A finite array of options sharing one dimension. Duplicates are allowed.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<OptionVec>", into = "Vec<OptionVec>")]
pub struct OptionSet(Vec<OptionVec>);

impl TryFrom<Vec<OptionVec>> for OptionSet {
    type Error = Error;

    fn try_from(items: Vec<OptionVec>) -> Result<Self> {
        OptionSet::new(items)
    }
}

impl From<OptionSet> for Vec<OptionVec> {
    fn from(s: OptionSet) -> Self {
        s.0
    }
}

impl OptionSet {
    pub fn new(items: Vec<OptionVec>) -> Result<Self> {
        if let Some(first) = items.first() {
            for item in &items[1..] {
                first.check_dim(item)?;
            }
        }
        Ok(Self(items))
    }

    /// Builds a set from raw rows; panics on malformed input. Intended for
    /// literals in tests and examples.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let items = rows
            .iter()
            .map(|r| OptionVec::new(r.as_ref().to_vec()).expect("valid option"))
            .collect();
        Self::new(items).expect("consistent dimensions")
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn items(&self) -> &[OptionVec] {
        &self.0
    }

    pub fn into_items(self) -> Vec<OptionVec> {
        self.0
    }

    /// Dimension of the members, `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.0.first().map(OptionVec::dim)
    }

    pub fn push(&mut self, item: OptionVec) -> Result<()> {
        if let Some(d) = self.dim() {
            check_dim(d, item.dim())?;
        }
        self.0.push(item);
        Ok(())
    }

    /// A copy of this set with `item` appended.
    pub fn with(&self, item: OptionVec) -> Result<OptionSet> {
        let mut out = self.clone();
        out.push(item)?;
        Ok(out)
    }

    /// A copy of this set with the element at `index` removed.
    pub fn without(&self, index: usize) -> OptionSet {
        let mut items = self.0.clone();
        items.remove(index);
        Self(items)
    }

    /// Exact componentwise membership.
    pub fn contains(&self, v: &OptionVec) -> bool {
        self.0.iter().any(|x| x == v)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.dim() {
            Some(d) => check_dim(dim, d),
            None => Ok(()),
        }
    }
}

impl Deref for OptionSet {
    type Target = [OptionVec];

    fn deref(&self) -> &[OptionVec] {
        &self.0
    }
}

impl FromIterator<OptionVec> for OptionSet {
    /// Panics if the items disagree on dimension.
    fn from_iter<I: IntoIterator<Item = OptionVec>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect()).expect("consistent dimensions")
    }
}

impl IntoIterator for OptionSet {
    type Item = OptionVec;
    type IntoIter = std::vec::IntoIter<OptionVec>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a OptionSet {
    type Item = &'a OptionVec;
    type IntoIter = std::slice::Iter<'a, OptionVec>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for OptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// `A − u`, in input order.
pub fn translate_set(set: &OptionSet, u: &OptionVec) -> Result<OptionSet> {
    let items = set.iter().map(|a| a.sub(u)).collect::<Result<Vec<_>>>()?;
    Ok(OptionSet(items))
}

/// One statement "the options in `rejected` were rejected from `chosen ∪ rejected`".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssessmentPair {
    chosen: OptionSet,
    rejected: OptionSet,
}

impl AssessmentPair {
    pub fn new(chosen: OptionSet, rejected: OptionSet) -> Result<Self> {
        if chosen.is_empty() {
            return Err(Error::InvalidPair("the chosen set must be nonempty".into()));
        }
        if let (Some(a), Some(b)) = (chosen.dim(), rejected.dim()) {
            check_dim(a, b)?;
        }
        if let Some(shared) = chosen.iter().find(|v| rejected.contains(v)) {
            return Err(Error::InvalidPair(format!(
                "option {shared:?} appears among both chosen and rejected options"
            )));
        }
        Ok(Self { chosen, rejected })
    }

    pub fn chosen(&self) -> &OptionSet {
        &self.chosen
    }

    pub fn rejected(&self) -> &OptionSet {
        &self.rejected
    }

    pub fn dim(&self) -> usize {
        self.chosen.dim().expect("chosen set is nonempty")
    }
}

#[derive(Deserialize)]
struct RawPair {
    chosen: OptionSet,
    #[serde(default)]
    rejected: OptionSet,
}

impl<'de> Deserialize<'de> for AssessmentPair {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPair::deserialize(de)?;
        AssessmentPair::new(raw.chosen, raw.rejected).map_err(serde::de::Error::custom)
    }
}

/// A finite sequence of assessment pairs over a fixed dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assessment {
    dimension: usize,
    pairs: Vec<AssessmentPair>,
}

impl Assessment {
    pub fn new(dimension: usize, pairs: Vec<AssessmentPair>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::EmptyVector);
        }
        for pair in &pairs {
            check_dim(dimension, pair.dim())?;
        }
        Ok(Self { dimension, pairs })
    }

    pub fn empty(dimension: usize) -> Result<Self> {
        Self::new(dimension, Vec::new())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn pairs(&self) -> &[AssessmentPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn push(&mut self, pair: AssessmentPair) -> Result<()> {
        check_dim(self.dimension, pair.dim())?;
        self.pairs.push(pair);
        Ok(())
    }

    pub fn remove(&mut self, index: usize) -> Option<AssessmentPair> {
        (index < self.pairs.len()).then(|| self.pairs.remove(index))
    }

    /// The assessment made of the first `len` pairs.
    pub fn prefix(&self, len: usize) -> Assessment {
        Self { dimension: self.dimension, pairs: self.pairs[..len.min(self.pairs.len())].to_vec() }
    }
}

#[derive(Deserialize)]
struct RawAssessment {
    dimension: usize,
    pairs: Vec<AssessmentPair>,
}

impl<'de> Deserialize<'de> for Assessment {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawAssessment::deserialize(de)?;
        Assessment::new(raw.dimension, raw.pairs).map_err(serde::de::Error::custom)
    }
}

/// Maps every option `x` of every pair to `lambda * x + shift`.
pub fn rescale_assessment(a: &Assessment, lambda: f64, shift: &OptionVec) -> Result<Assessment> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("rescaling factor must be positive, got {lambda}")));
    }
    check_dim(a.dimension, shift.dim())?;
    let map = |set: &OptionSet| -> Result<OptionSet> {
        Ok(OptionSet(set.iter().map(|x| x.affine(lambda, shift)).collect::<Result<_>>()?))
    };
    let pairs = a
        .pairs
        .iter()
        .map(|p| Ok(AssessmentPair { chosen: map(&p.chosen)?, rejected: map(&p.rejected)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Assessment { dimension: a.dimension, pairs })
}

/// Applies `lambda * x + shift` to every member of an option set.
pub fn rescale_set(set: &OptionSet, lambda: f64, shift: &OptionVec) -> Result<OptionSet> {
    Ok(OptionSet(set.iter().map(|x| x.affine(lambda, shift)).collect::<Result<_>>()?))
}

/// The `{"options": [...]}` document used on the command line and over HTTP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionSetDoc {
    pub options: OptionSet,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> OptionVec {
        OptionVec::new(xs.to_vec()).unwrap()
    }

    const CFG: ToleranceConfig = ToleranceConfig { tau: 0.0, lp_tol: 1e-9 };

    #[test]
    fn leq_examples() {
        assert!(leq(&v(&[0., 0.]), &v(&[0., 0.]), &CFG).unwrap());
        assert!(leq(&v(&[1., -1.]), &v(&[2., 0.]), &CFG).unwrap());
        assert!(!leq(&v(&[4., -2.]), &v(&[0., 0.]), &CFG).unwrap());
        assert!(matches!(
            leq(&v(&[1.]), &v(&[1., 2.]), &CFG),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn strictly_less_examples() {
        assert!(strictly_less(&v(&[0., 0.]), &v(&[0., 1.]), &CFG).unwrap());
        assert!(!strictly_less(&v(&[0., 0.]), &v(&[0., 0.]), &CFG).unwrap());
        assert!(!strictly_less(&v(&[0., 0.]), &v(&[-7., 7.]), &CFG).unwrap());
        assert!(strictly_less(&v(&[0.]), &v(&[1.]), &CFG).is_ok());
        assert!(strictly_less(&v(&[0.]), &v(&[1., 1.]), &CFG).is_err());
    }

    #[test]
    fn tau_slack() {
        let cfg = ToleranceConfig::new(0.1, 1e-9).unwrap();
        assert!(leq(&v(&[1.05]), &v(&[1.0]), &cfg).unwrap());
        assert!(!strictly_less(&v(&[1.0]), &v(&[1.05]), &cfg).unwrap());
        assert!(ToleranceConfig::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn translate_examples() {
        let a3 = OptionSet::from_rows(&[[-3., 4.], [0., 1.], [4., -3.]]);
        let out = translate_set(&a3, &v(&[4., -3.])).unwrap();
        assert_eq!(out, OptionSet::from_rows(&[[-7., 7.], [-4., 4.], [0., 0.]]));
        assert_eq!(translate_set(&a3, &OptionVec::zeros(2)).unwrap(), a3);
        let one = OptionSet::from_rows(&[[1., 1.]]);
        assert_eq!(translate_set(&one, &v(&[1., 1.])).unwrap(), OptionSet::from_rows(&[[0., 0.]]));
        assert!(translate_set(&one, &v(&[1.])).is_err());
    }

    #[test]
    fn rescale_examples() {
        let pair = AssessmentPair::new(OptionSet::from_rows(&[[1., 0.]]), OptionSet::from_rows(&[[0., 1.]])).unwrap();
        let a = Assessment::new(2, vec![pair]).unwrap();
        assert_eq!(rescale_assessment(&a, 1.0, &OptionVec::zeros(2)).unwrap(), a);
        let r = rescale_assessment(&a, 2.0, &v(&[1., 1.])).unwrap();
        assert_eq!(r.pairs()[0].chosen(), &OptionSet::from_rows(&[[3., 1.]]));
        assert_eq!(r.pairs()[0].rejected(), &OptionSet::from_rows(&[[1., 3.]]));
        assert!(rescale_assessment(&a, 0.0, &OptionVec::zeros(2)).is_err());
        assert!(rescale_assessment(&a, -1.0, &OptionVec::zeros(2)).is_err());
    }

    #[test]
    fn pair_validation() {
        let empty = AssessmentPair::new(OptionSet::empty(), OptionSet::from_rows(&[[1., 1.]]));
        assert!(matches!(empty, Err(Error::InvalidPair(_))));
        let overlap = AssessmentPair::new(OptionSet::from_rows(&[[1., 1.]]), OptionSet::from_rows(&[[1., 1.]]));
        assert!(matches!(overlap, Err(Error::InvalidPair(_))));
        let dims = AssessmentPair::new(OptionSet::from_rows(&[[1., 1.]]), OptionSet::from_rows(&[[1.]]));
        assert!(matches!(dims, Err(Error::DimensionMismatch { .. })));
        assert!(OptionVec::new(vec![f64::NAN]).is_err());
        assert!(OptionVec::new(vec![]).is_err());
    }

    #[test]
    fn assessment_json() {
        let text = r#"{ "dimension": 2, "pairs": [
            { "chosen": [[5,-3],[3,-2]], "rejected": [[1,-1],[-2,1]] },
            { "chosen": [[-4,8]], "rejected": [[3,1]] } ] }"#;
        let a: Assessment = serde_json::from_str(text).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.pairs()[1].chosen(), &OptionSet::from_rows(&[[-4., 8.]]));
        let back: Assessment = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);

        let bad_dim = r#"{ "dimension": 3, "pairs": [ { "chosen": [[1,2]], "rejected": [] } ] }"#;
        assert!(serde_json::from_str::<Assessment>(bad_dim).is_err());
        let ragged = r#"{ "dimension": 2, "pairs": [ { "chosen": [[1,2],[1]], "rejected": [] } ] }"#;
        assert!(serde_json::from_str::<Assessment>(ragged).is_err());
        let no_chosen = r#"{ "dimension": 2, "pairs": [ { "chosen": [], "rejected": [[1,2]] } ] }"#;
        assert!(serde_json::from_str::<Assessment>(no_chosen).is_err());

        let doc: OptionSetDoc = serde_json::from_str(r#"{ "options": [[-3,4],[0,1],[4,-3]] }"#).unwrap();
        assert_eq!(doc.options.len(), 3);
    }

    fn small_vec(dim: usize) -> impl Strategy<Value = OptionVec> {
        prop::collection::vec(-3i32..=3, dim).prop_map(|xs| OptionVec::new(xs.into_iter().map(f64::from).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn leq_is_a_partial_order(u in small_vec(3), v in small_vec(3), w in small_vec(3)) {
            prop_assert!(leq(&u, &u, &CFG).unwrap());
            if leq(&u, &v, &CFG).unwrap() && leq(&v, &u, &CFG).unwrap() {
                prop_assert_eq!(&u, &v);
            }
            if leq(&u, &v, &CFG).unwrap() && leq(&v, &w, &CFG).unwrap() {
                prop_assert!(leq(&u, &w, &CFG).unwrap());
            }
        }

        #[test]
        fn strict_implies_asymmetric(u in small_vec(3), v in small_vec(3)) {
            if strictly_less(&u, &v, &CFG).unwrap() {
                prop_assert!(leq(&u, &v, &CFG).unwrap());
                prop_assert!(!leq(&v, &u, &CFG).unwrap());
            }
        }

        #[test]
        fn translation_round_trip(rows in prop::collection::vec(small_vec(2), 0..6), u in small_vec(2)) {
            let set = OptionSet::new(rows).unwrap();
            let back = translate_set(&translate_set(&set, &u).unwrap(), &u.negate()).unwrap();
            prop_assert_eq!(back, set);
        }
    }
}
