mod common;

use common::*;
use proptest::prelude::*;
use std::collections::BTreeSet;
use xcsp::formula::{Graph, Instance};
use xcsp::k4::{closure, decide_k4, find_violation, refute_k4, K4Prover};
use xcsp::oracle::{decide, explore, GraphBoard};

type Tri = BTreeSet<usize>;

#[derive(Default, PartialEq, Eq, Debug)]
struct Naive {
    f: BTreeSet<(usize, usize)>,
    plus: BTreeSet<Vec<usize>>,
    minus: BTreeSet<Vec<usize>>,
}

fn key(t: &[usize]) -> Vec<usize> {
    let s: Tri = t.iter().copied().collect();
    s.into_iter().collect()
}

/// The seven rules applied by sweeping every tuple of variables until no
/// sweep adds anything.
fn naive_closure(inst: &Instance) -> Naive {
    let n = inst.len();
    let mut s = Naive::default();
    for (a, b) in inst.atoms().filter(|(a, b)| a != b) {
        s.f.insert((a, b));
    }
    let f = |s: &Naive, a: usize, b: usize| s.f.contains(&(a.min(b), a.max(b)));
    let p = |s: &Naive, t: [usize; 3]| s.plus.contains(&key(&t));
    let m = |s: &Naive, t: [usize; 3]| s.minus.contains(&key(&t));
    loop {
        let before = (s.f.len(), s.plus.len(), s.minus.len());
        let mut add_f = Vec::new();
        let mut add_p = Vec::new();
        let mut add_m = Vec::new();
        for z in 0..n {
            for x in 0..z {
                for y in 0..z {
                    if x == y {
                        continue;
                    }
                    if f(&s, x, z) && f(&s, y, z) {
                        add_m.push([x, y, z]); // X1
                    }
                    for w in 0..z {
                        if w == x || w == y {
                            continue;
                        }
                        if f(&s, w, z) && m(&s, [x, y, z]) {
                            add_p.push([x, y, w]); // X2
                        }
                        if f(&s, w, z) && p(&s, [x, y, z]) {
                            if x < w && y < w {
                                add_m.push([x, y, w]); // X3
                            } else {
                                add_f.push((x, w));
                                add_f.push((y, w));
                            }
                        }
                        if (p(&s, [x, y, z]) && p(&s, [w, y, z]))
                            || (m(&s, [x, y, z]) && m(&s, [w, y, z]))
                        {
                            add_p.push([x, y, w]); // X5
                        }
                        for q in 0..z {
                            if [x, y, w].contains(&q) || !(x < q && y < q && w < q) {
                                continue;
                            }
                            let same = (p(&s, [x, y, z]) && p(&s, [w, q, z]))
                                || (m(&s, [x, y, z]) && m(&s, [w, q, z]));
                            if same {
                                add_p.push([x, y, w]); // X6
                                add_p.push([x, y, q]);
                            }
                            let mixed = (p(&s, [x, y, z]) && m(&s, [w, q, z]))
                                || (m(&s, [x, y, z]) && p(&s, [w, q, z]));
                            if mixed {
                                add_m.push([x, y, q]); // X7
                                if x < w && y < w {
                                    add_m.push([x, y, w]);
                                } else {
                                    add_f.push((x, w));
                                    add_f.push((y, w));
                                }
                            }
                        }
                    }
                }
            }
            // X4: {x,w} < y < z.
            for y in 0..z {
                for x in 0..y {
                    for w in 0..y {
                        if w != x && p(&s, [x, y, z]) && m(&s, [w, y, z]) {
                            add_f.push((x, w));
                            add_p.push([x, y, w]);
                        }
                    }
                }
            }
        }
        for (a, b) in add_f {
            s.f.insert((a.min(b), a.max(b)));
        }
        for t in add_p {
            s.plus.insert(key(&t));
        }
        for t in add_m {
            s.minus.insert(key(&t));
        }
        if (s.f.len(), s.plus.len(), s.minus.len()) == before {
            return s;
        }
    }
}

fn library_sets(inst: &Instance) -> Naive {
    let c = closure(inst);
    Naive {
        f: c.f_pairs().into_iter().collect(),
        plus: c
            .plus_triples()
            .into_iter()
            .map(|(a, b, d)| vec![a, b, d])
            .collect(),
        minus: c
            .minus_triples()
            .into_iter()
            .map(|(a, b, d)| vec![a, b, d])
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn worklist_closure_matches_sweeping(inst in instance(7, &[2], false)) {
        prop_assert_eq!(library_sets(&inst), naive_closure(&inst));
    }

    #[test]
    fn agrees_with_oracle(inst in instance(7, &[2], true)) {
        prop_assert_eq!(decide_k4(&inst), decide(&inst, &Graph::complete(4)).unwrap());
    }

    #[test]
    fn removing_an_atom_keeps_yes(inst in instance(7, &[2], false), pick in any::<prop::sample::Index>()) {
        let atoms: Vec<_> = inst.atoms().collect();
        if decide_k4(&inst) && !atoms.is_empty() {
            let drop = atoms[pick.index(atoms.len())];
            let counts: Vec<u32> = inst.counts().collect();
            let rest: Vec<_> = atoms.into_iter().filter(|&a| a != drop).collect();
            prop_assert!(decide_k4(&Instance::from_counts(&counts, &rest)));
        }
    }

    #[test]
    fn four_step_prover_wins_yes_instances(inst in instance(7, &[2], false)) {
        if decide_k4(&inst) {
            let k4 = Graph::complete(4);
            prop_assert!(explore(&inst, &GraphBoard(&k4), &mut K4Prover::new(&inst)).unwrap().prover_always_wins());
        }
    }
}

#[test]
fn refutation_is_a_violation_of_the_closed_sets() {
    let k5 = Instance::from_counts(&[2; 5], &xcsp::generate::pairs(5));
    let v = refute_k4(&k5).expect("K5 does not fit in K4");
    assert_eq!(find_violation(&closure(&k5)), Some(v));
}

#[test]
fn triangle_and_k4_shapes() {
    let triangle = Instance::from_counts(&[2; 3], &[(0, 1), (1, 2), (0, 2)]);
    assert!(decide_k4(&triangle));
    let k4 = Instance::from_counts(&[2; 4], &xcsp::generate::pairs(4));
    assert!(!decide_k4(&k4));
    let looped = Instance::from_counts(&[2], &[(0, 0)]);
    assert!(!decide_k4(&looped));
}
