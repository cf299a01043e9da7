mod common;

use std::cell::Cell;

use choix::feasibility::oracle::fm_oracle;
use choix::generators::{
    assessment_to_conjunctive, assessment_to_conjunctive_naive, conjunctive_to_disjunctive_simplified, disjunctive_size,
    max_elements, min_cone_subset, simplify_disjunctive,
};
use choix::options::is_positive;
use choix::{g_ord, ConjGenerator, DisjGenerator, OptionSet, OptionVec};
use common::{assessment, kind_from, rng, CFG};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;

fn int_set(r: &mut impl Rng, n: usize, dim: usize) -> OptionSet {
    (0..n).map(|_| OptionVec::new((0..dim).map(|_| r.random_range(-3i32..=3) as f64).collect()).unwrap()).collect()
}

/// Exact membership in the natural-extension cone.
fn in_cone(g: &OptionSet, v: &OptionVec) -> bool {
    is_positive(v, &CFG) || fm_oracle(g, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn stream_length_matches_product(sizes in prop::collection::vec(0usize..=5, 0..6)) {
        let sets: Vec<OptionSet> = sizes.iter().enumerate()
            .map(|(i, &n)| (0..n).map(|j| OptionVec::new(vec![i as f64, j as f64]).unwrap()).collect())
            .collect();
        let h = ConjGenerator::new(sets);
        prop_assert_eq!(BigUint::from(h.stream().count()), disjunctive_size(&h));
        // every selection picks one option from each set, in order
        for g in h.stream().take(50) {
            prop_assert_eq!(g.len(), sizes.len());
            for (i, v) in g.iter().enumerate() {
                prop_assert_eq!(v[0], i as f64);
            }
        }
    }

    #[test]
    fn max_elements_keeps_an_antichain_covering_everything(values in prop::collection::vec(0i32..20, 0..12)) {
        // preorder on integers: compare by value modulo 5 buckets, dominated when bucket is lower or equal
        let calls = Cell::new(0usize);
        let dominated = |s: &i32, t: &i32| {
            calls.set(calls.get() + 1);
            Ok::<_, ()>(s / 5 <= t / 5)
        };
        let out = max_elements(values.clone(), dominated).unwrap();
        let n = values.len();
        prop_assert!(calls.get() <= n * n.saturating_sub(1));
        if let Some(top) = values.iter().map(|v| v / 5).max() {
            prop_assert_eq!(out.len(), 1);
            prop_assert_eq!(out[0] / 5, top);
            // first representative of the top class
            prop_assert_eq!(Some(&out[0]), values.iter().find(|v| *v / 5 == top));
        } else {
            prop_assert!(out.is_empty());
        }
    }

    #[test]
    fn min_cone_subset_preserves_the_cone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=4);
        let g = int_set(&mut r, n, 3);
        prop_assume!(!fm_oracle(&g, &OptionVec::zeros(3)).unwrap());
        let m = min_cone_subset(&g, &CFG).unwrap();
        prop_assert!(m.iter().all(|u| g.contains(u)));
        for _ in 0..10 {
            let probe = int_set(&mut r, 1, 3);
            prop_assert_eq!(in_cone(&m, &probe[0]), in_cone(&g, &probe[0]));
        }
        // minimal: no member is redundant
        for i in 0..m.len() {
            let rest = m.without(i);
            prop_assert!(!fm_oracle(&rest, &m[i]).unwrap());
        }
    }

    #[test]
    fn simplification_is_idempotent(seed in any::<u64>(), pairs in 1usize..=4) {
        let mut r = rng(seed);
        let a = assessment(kind_from(seed), pairs, &mut r);
        let h = assessment_to_conjunctive(&a, &CFG).unwrap();
        let g = conjunctive_to_disjunctive_simplified(&h, &CFG).unwrap();
        let again = simplify_disjunctive(&g, &CFG).unwrap();
        prop_assert_eq!(again.len(), g.len());
        for (x, y) in g.sets().iter().zip(again.sets()) {
            prop_assert!(g_ord(x, y, &CFG).unwrap() && g_ord(y, x, &CFG).unwrap());
        }
    }

    #[test]
    fn generator_sizes_are_ordered(seed in any::<u64>(), pairs in 0usize..=5) {
        let mut r = rng(seed);
        let a = assessment(kind_from(seed), pairs, &mut r);
        let naive = assessment_to_conjunctive_naive(&a);
        let simple = assessment_to_conjunctive(&a, &CFG).unwrap();
        let full = conjunctive_to_disjunctive_simplified(&simple, &CFG).unwrap();
        prop_assert!(simple.len() <= naive.len());
        prop_assert!(BigUint::from(full.len()) <= disjunctive_size(&simple));
        prop_assert!(disjunctive_size(&simple) <= disjunctive_size(&naive));
        prop_assert!(!full.is_empty());
    }
}

#[test]
fn simplifying_the_full_stream_matches_stepwise_construction() {
    for seed in 0..20u64 {
        let mut r = rng(500 + seed);
        let a = assessment(kind_from(seed), 3, &mut r);
        let h = assessment_to_conjunctive(&a, &CFG).unwrap();
        let stepwise = conjunctive_to_disjunctive_simplified(&h, &CFG).unwrap();
        let whole = simplify_disjunctive(&DisjGenerator::from_conjunctive(&h), &CFG).unwrap();
        assert_eq!(stepwise.len(), whole.len(), "seed {seed}");
        for x in stepwise.sets() {
            assert!(whole.sets().iter().any(|y| g_ord(x, y, &CFG).unwrap() && g_ord(y, x, &CFG).unwrap()));
        }
    }
}
