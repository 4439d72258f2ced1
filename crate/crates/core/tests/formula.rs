mod common;

use common::*;
use proptest::prelude::*;
use xcsp::formula::*;

proptest! {
    #[test]
    fn instance_text_round_trips(inst in instance(6, &[1, 2, 3], true)) {
        prop_assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn template_text_round_trips(g in graph(6, true)) {
        prop_assert_eq!(parse_template(&serialize_template(&g)).unwrap(), g);
    }

    #[test]
    fn relabelling_preserves_isomorphism(g in graph(6, true), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..g.len()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(g.isomorphic(&g.permuted(&perm)));
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_instance("var x 1\nedge x y\n").unwrap_err();
    assert_eq!(
        err,
        ParseError::Undeclared {
            line: 2,
            column: 8,
            name: "y".into()
        }
    );
    let err = parse_instance("var x 0\n").unwrap_err();
    assert!(matches!(err, ParseError::ZeroCount { line: 1, .. }));
    let err = parse_instance("var x 1\nvar x 2\n").unwrap_err();
    assert!(matches!(err, ParseError::Duplicate { line: 2, .. }));
    let err = parse_template("vertex a twice\n").unwrap_err();
    assert!(matches!(
        err,
        ParseError::Syntax {
            line: 1,
            column: 10,
            ..
        }
    ));
}

#[test]
fn comments_and_forward_edges() {
    let inst = parse_instance("# header\nedge a b  # forward\nvar a 2\nvar b 1\n").unwrap();
    assert_eq!(inst.len(), 2);
    assert_eq!(inst.count(0), 2);
    assert!(inst.has_atom(0, 1));
}
