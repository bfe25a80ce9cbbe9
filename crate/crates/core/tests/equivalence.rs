//! Cross-route equivalence: the contraction engine, the brute-force
//! Wang tiler and the brute-force shape tiler must agree wherever they
//! overlap, for every shipped tile translation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use wangcount::oracle::{self, Board};
use wangcount::polyomino::{self, PolyominoSet};
use wangcount::regions;

const CATALOGS: &[&str] = &[
    "monomino",
    "I-family",
    "I2",
    "I3",
    "I2+I3",
    "O4",
    "I2+O4",
    "I2+L3",
    "L3",
    "I2+I3+L3",
    "I3+L3",
    "tetrominoes",
    "pentominoes",
];

fn boards(max_area: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for l in 1..=max_area {
        for h in 1..=(max_area / l) {
            out.push((l, h));
        }
    }
    out
}

#[test]
fn engine_matches_wang_oracle_to_area_20() {
    for name in CATALOGS {
        let ts = polyomino::catalog(name).unwrap().tiles;
        for (l, h) in boards(20) {
            let engine = regions::count_rectangle(&ts, l as usize, h as usize).unwrap();
            let exact = oracle::count_wang_tilings(
                &ts,
                &Board::rectangle(l, h).with_area_cap(20),
            )
            .unwrap();
            assert_eq!(BigInt::from(engine), exact, "{name} {l}x{h}");
        }
    }
}

#[test]
fn wang_oracle_matches_shape_oracle_to_area_20() {
    for name in CATALOGS {
        let d = polyomino::catalog(name).unwrap();
        for (l, h) in boards(20) {
            if l > h {
                continue; // both counters are transpose-invariant
            }
            let board = Board::rectangle(l, h).with_area_cap(20);
            let wang = oracle::count_wang_tilings(&d.tiles, &board).unwrap();
            let shape = oracle::count_polyomino_tilings(&d.source, &board).unwrap();
            assert_eq!(wang, BigInt::from(shape), "{name} {l}x{h}");
        }
    }
}

#[test]
fn composition_operators_commute_with_validation() {
    // Adding the lone cell or the 2x2 square must leave a translation
    // that still validates against the enlarged shape set.
    for name in ["I2", "L3", "I3+L3"] {
        let mut d = polyomino::add_monomino(&polyomino::catalog(name).unwrap()).unwrap();
        let report = d.validate(16);
        assert!(report.pass, "monomino + {name}: {:?}", report.witness());
    }
    for name in ["I2", "I3", "I2+I3"] {
        let mut d = polyomino::add_o4(&polyomino::catalog(name).unwrap()).unwrap();
        let report = d.validate(16);
        assert!(report.pass, "{name} + square: {:?}", report.witness());
    }
    // Stacked: monomino on top of an added square.
    let mut d = polyomino::add_monomino(
        &polyomino::add_o4(&polyomino::catalog("I3").unwrap()).unwrap(),
    )
    .unwrap();
    let report = d.validate(16);
    assert!(report.pass, "monomino + I3 + square: {:?}", report.witness());
}

#[test]
fn generic_translation_matches_catalog_counts_to_area_16() {
    for name in ["I2", "I3", "L3", "O4", "I2+I3", "I2+L3", "I2+I3+L3"] {
        let cat = polyomino::catalog(name).unwrap();
        let gen = polyomino::generic_decomposition(&cat.source);
        for (l, h) in boards(16) {
            let a = regions::count_rectangle(&cat.tiles, l as usize, h as usize).unwrap();
            let b = regions::count_rectangle(&gen.tiles, l as usize, h as usize).unwrap();
            assert_eq!(a, b, "{name} {l}x{h}");
        }
    }
}

#[test]
fn i_family_generator_agrees_with_two_char_catalog() {
    // The countdown generator and the two-character family translation
    // are independent constructions of the same counts.
    let lengths: BTreeSet<usize> = (1..=6).collect();
    let gen = polyomino::build_i_family(&lengths, 6).unwrap();
    let cat = polyomino::catalog("I-family").unwrap();
    for (l, h) in boards(12) {
        if l.max(h) > 6 {
            continue; // the generator is truncated at length 6
        }
        let a = regions::count_rectangle(&gen.tiles, l as usize, h as usize).unwrap();
        let b = regions::count_rectangle(&cat.tiles, l as usize, h as usize).unwrap();
        assert_eq!(a, b, "{l}x{h}");
    }
}

#[test]
fn shape_set_construction_from_files_counts_like_catalog() {
    // A polyomino file routed through the generic translator counts the
    // same boards as the curated catalog entry.
    let text = "##\n\n#\n#\n#\n";
    let shapes = polyomino::parse_polyominoes(text).unwrap();
    let set = PolyominoSet::new(shapes).unwrap();
    let gen = polyomino::generic_decomposition(&set);
    let cat = polyomino::catalog("I2+I3").unwrap();
    for (l, h) in boards(12) {
        let a = regions::count_rectangle(&gen.tiles, l as usize, h as usize).unwrap();
        let b = regions::count_rectangle(&cat.tiles, l as usize, h as usize).unwrap();
        assert_eq!(a, b, "{l}x{h}");
    }
}
