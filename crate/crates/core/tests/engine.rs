mod common;

use common::*;
use uclasses::root_system::RootKind;

const TYPES: [(RootKind, usize); 10] = [
    (RootKind::A, 2),
    (RootKind::A, 3),
    (RootKind::B, 2),
    (RootKind::G, 2),
    (RootKind::B, 3),
    (RootKind::C, 3),
    (RootKind::A, 4),
    (RootKind::B, 4),
    (RootKind::C, 4),
    (RootKind::D, 4),
];

#[test]
fn multiplication_is_associative() {
    for (i, &(k, r)) in TYPES.iter().enumerate() {
        for q in [2, 3, 4] {
            associativity_check(k, r, q, 500, 17 * i as u64 + q).unwrap();
        }
    }
}

#[test]
fn lie_relations_in_natural_representations() {
    for (k, r) in [(RootKind::B, 2), (RootKind::B, 3), (RootKind::C, 3), (RootKind::C, 4), (RootKind::D, 4)] {
        let rs = root_system(k, r);
        let sc = uclasses::engine::StructureConstants::new(&rs);
        assert!(Realization::new(rs).lie_relations_hold(|a, b| sc.n(a, b)), "{k:?}{r}");
    }
}

#[test]
fn matrices_agree_exhaustively_over_f2() {
    for (k, r) in [(RootKind::B, 2), (RootKind::B, 3), (RootKind::C, 3)] {
        matrix_check_exhaustive(k, r).unwrap();
    }
}

#[test]
fn matrices_agree_on_random_pairs() {
    for (k, r) in [(RootKind::B, 2), (RootKind::B, 3), (RootKind::C, 3), (RootKind::B, 4), (RootKind::C, 4), (RootKind::D, 4)] {
        for q in [3, 4] {
            matrix_check_random(k, r, q, 300, q).unwrap();
        }
    }
}

#[test]
fn root_elements_generate_the_whole_group() {
    assert_eq!(generated_order(RootKind::B, 2, 2), 16);
    assert_eq!(generated_order(RootKind::B, 2, 3), 81);
    assert_eq!(generated_order(RootKind::G, 2, 2), 64);
    assert_eq!(generated_order(RootKind::A, 2, 4), 64);
}
