mod common;

use common::*;
use proptest::prelude::*;
use std::collections::BTreeSet;
use xcsp::classify::{
    classify, decide_dominating, decide_small, p100_obstruction, Complexity, ShapeError,
};
use xcsp::formula::{Graph, Instance, Template};
use xcsp::generate::instances_with_loops;
use xcsp::oracle::decide;

fn quantifier_sets() -> impl Strategy<Value = BTreeSet<u32>> {
    proptest::collection::btree_set(1u32..=6, 1..=3)
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn invariant_under_relabelling(
        (g, perm) in graph(6, true).prop_flat_map(|g| { let n = g.len(); (Just(g), permutation(n)) }),
        x in prop_oneof![Just(BTreeSet::from([1, 2])), quantifier_sets()],
    ) {
        let h = g.permuted(&perm);
        prop_assert_eq!(
            classify(&Template::Finite(g), &x),
            classify(&Template::Finite(h), &x)
        );
    }

    #[test]
    fn trivial_yes_is_always_true(g in graph(4, true), inst in instance(4, &[1, 2], true)) {
        let label = classify(&Template::Finite(g.clone()), &BTreeSet::from([1, 2]));
        if label.complexity == Complexity::TrivialYes {
            prop_assert!(decide(&inst, &g).unwrap());
        }
    }

    #[test]
    fn deciders_behind_polynomial_labels_agree(g in graph(3, true), inst in instance(5, &[1, 2], true)) {
        let label = classify(&Template::Finite(g.clone()), &BTreeSet::from([1, 2]));
        if label.complexity == Complexity::InP && !g.isomorphic(&Graph::p100()) {
            prop_assert_eq!(decide_small(&inst, &g), Ok(decide(&inst, &g).unwrap()));
        }
    }

    #[test]
    fn p100_patterns_never_accept_a_no_instance(inst in instance(6, &[1, 2], false)) {
        if p100_obstruction(&inst).is_none() {
            prop_assert!(decide(&inst, &Graph::p100()).unwrap());
        }
    }
}

#[test]
fn cli_examples() {
    let label = |t: &str, x: &[u32]| {
        classify(
            &Template::parse_spec(t).unwrap(),
            &x.iter().copied().collect(),
        )
        .to_string()
    };
    assert!(label("k4", &[2]).starts_with("in-P"));
    assert!(label("cycle6", &[1, 2]).starts_with("Pspace-complete"));
    assert!(label("k2", &[1]).starts_with("in-L"));
    assert_eq!(label("k3", &[1, 3, 4]), "unknown");
}

#[test]
fn dominating_needs_the_right_shape() {
    let inst = Instance::from_counts(&[2], &[]);
    assert_eq!(
        decide_dominating(&inst, &Graph::p100()),
        Err(ShapeError::NoDominatingLoop)
    );
    let k3_apex = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2), (3, 3)]);
    assert_eq!(
        decide_dominating(&inst, &k3_apex),
        Err(ShapeError::NonBipartiteRemainder)
    );
    let three = Instance::from_counts(&[1, 2, 3], &[]);
    assert!(matches!(
        decide_small(&three, &Graph::p10()),
        Err(ShapeError::Counts)
    ));
}

#[test]
fn star_with_looped_centre_matches_oracle() {
    let star = Graph::from_edges(5, &[(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)]);
    for inst in instances_with_loops(3, &[1, 2]) {
        assert_eq!(
            decide_dominating(&inst, &star),
            Ok(decide(&inst, &star).unwrap()),
            "{inst:?}"
        );
    }
}
