#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use taut_multislope::branched::{
    BranchSegment, BranchedComplex, Cusp, Sector, SectorKind, SegmentLocus,
};
use taut_multislope::surface::{SurfaceSpec, SurfaceType};
use taut_multislope::words::{GervaisAlphabet, Letter, MacroTable, Symbol, TwistWord};

pub const BE_MACROS: &str = include_str!("../fixtures/be.macros");

pub fn spec(g: usize, k: usize) -> SurfaceSpec {
    SurfaceSpec::new(g, k).unwrap()
}

/// Random unreduced word with at most `max_len` syllables over every letter
/// of the alphabet, exponents in `±1..=±3`.
pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &GervaisAlphabet, max_len: usize) -> TwistWord {
    let len = rng.gen_range(0..=max_len);
    TwistWord::from_syllables((0..len).map(|_| {
        let l: Letter = *alphabet.letters().choose(rng).unwrap();
        let e = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        (Symbol::Letter(l), e)
    }))
}

/// Random word mixing letters and the macros of `table`.
pub fn random_macro_word(
    rng: &mut ChaCha8Rng,
    alphabet: &GervaisAlphabet,
    table: &MacroTable,
    max_len: usize,
) -> TwistWord {
    let names: Vec<&str> = table.names().collect();
    let len = rng.gen_range(0..=max_len);
    TwistWord::from_syllables((0..len).map(|_| {
        let symbol = if !names.is_empty() && rng.gen_bool(0.4) {
            Symbol::Macro(names.choose(rng).unwrap().to_string())
        } else {
            Symbol::Letter(*alphabet.letters().choose(rng).unwrap())
        };
        let e = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        (symbol, e)
    }))
}

/// Random complex of free-standing sectors with arbitrary cusp labels.
pub fn random_complex(rng: &mut ChaCha8Rng) -> BranchedComplex {
    let count = rng.gen_range(1..=12);
    let sectors = (0..count)
        .map(|i| {
            let topology = match rng.gen_range(0..4) {
                0 | 1 => SurfaceType {
                    genus: 0,
                    boundary_count: 1,
                },
                2 => SurfaceType {
                    genus: 0,
                    boundary_count: 2,
                },
                _ => SurfaceType {
                    genus: rng.gen_range(0..3),
                    boundary_count: rng.gen_range(1..4),
                },
            };
            let in_bias = rng.gen_range(0.5..1.0);
            let segments = (0..rng.gen_range(0..6))
                .map(|_| BranchSegment {
                    locus: SegmentLocus::Unlabeled,
                    cusp: if rng.gen_bool(in_bias) {
                        Cusp::In
                    } else {
                        Cusp::Out
                    },
                })
                .collect();
            Sector {
                id: format!("S{i}"),
                kind: SectorKind::Other,
                level: None,
                topology,
                meets_boundary: rng.gen_bool(0.5),
                segments,
            }
        })
        .collect();
    BranchedComplex {
        fiber: None,
        sectors,
    }
}

/// Re-reads the text form of a complex and lists `(id, half)` for every
/// disk sector whose branch directions all point into it.
pub fn brute_force_sinks(text: &str) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    for line in text.lines().filter(|l| l.starts_with("sector ")) {
        let get = |key: &str| {
            line.split(' ')
                .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                .unwrap()
        };
        if get("type") != "disk" {
            continue;
        }
        let cusps = get("cusps");
        let mut all_in = true;
        if cusps != "-" {
            for c in cusps.split(',') {
                if c != "in" {
                    all_in = false;
                }
            }
        }
        if all_in {
            out.push((get("id").to_string(), get("dm") == "yes"));
        }
    }
    out
}
