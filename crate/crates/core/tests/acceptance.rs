//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taut_multislope::be_example::{be_macros, psi, run_be, BeInstance};
use taut_multislope::branched::{
    build, euler_audit, find_sink_disks, BranchedComplex, Cusp, SectorKind, SinkKind,
};
use taut_multislope::sequence::synthesize;
use taut_multislope::slope::{slope_of_measure, witness_weights, Slope};
use taut_multislope::surface::{cut_along, standard_parallel_tuple};
use taut_multislope::words::{expand_macros, GervaisAlphabet, Letter, TwistWord};

use common::{brute_force_sinks, random_complex, random_macro_word, random_word, spec};

/// Wall-clock budget for the example family.
const BE_BUDGET: Duration = Duration::from_secs(5);
/// Wall-clock budget for the random sink disk sweep.
const SINK_BUDGET: Duration = Duration::from_secs(30);
/// Slope checks compare exact rationals; there is no tolerance.
const SLOPE_TOLERANCE: i64 = 0;

const BE_POWERS: std::ops::RangeInclusive<u64> = 1..=10;
const BE_K1: std::ops::RangeInclusive<i64> = 1..=50;
const SINK_WORDS: usize = 200;
const SINK_MAX_LEN: usize = 20;
const CHECKER_COMPLEXES: usize = 50;
const ROUND_TRIP_SAMPLES: usize = 1000;
const ROUND_TRIP_LEVELS: [u64; 4] = [1, 4, 8, 40];
const ALGEBRA_WORDS: usize = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r =
        run_be(BeInstance::new(1, 1, 0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let expansion = r.inverse_expansion.display_with(&r.aliases()).to_string();
    ensure(expansion == "a^3 b a^3 b a^3 b c^-1 b a^-1", || {
        format!("expansion {expansion}")
    })?;
    ensure(r.sequence.len() == 4, || {
        format!("n = {}", r.sequence.len())
    })?;
    ensure(r.interval.to_string() == "(-1/4, inf)", || {
        format!("interval {}", r.interval)
    })?;
    for n in BE_POWERS {
        let r = run_be(BeInstance::new(n, 1, 0).unwrap()).map_err(|e| e.to_string())?;
        let expected = BigRational::new((-1).into(), (4 * n).into());
        ensure(r.interval.lower == expected, || {
            format!("n={n}: lower {}", r.interval.lower)
        })?;
        ensure(r.sink_disks.is_empty(), || format!("n={n}: sink disks"))?;
        let levels = r.sequence.len() as u64;
        for k1 in BE_K1 {
            let v = taut_multislope::slope::multislope_query(
                levels,
                &[Slope::ratio(-1, k1), Slope::ratio(-1, n as i64)],
            )
            .map_err(|e| e.to_string())?;
            ensure(!v.is_realizable(), || format!("n={n} k1={k1} realized"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < BE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("n in 1..=10, k1 in 1..=50, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut levels = 0;
    for i in 0..SINK_WORDS {
        let (g, k) = (rng.gen_range(1..=3), rng.gen_range(2..=4));
        let alphabet = GervaisAlphabet::new(spec(g, k));
        let word = random_word(&mut rng, &alphabet, SINK_MAX_LEN);
        let inverse = word.drop_boundary_twists().invert();
        let seq = synthesize(&inverse, spec(g, k)).map_err(|e| format!("word {i}: {e}"))?;
        let complex = build(&seq).map_err(|e| format!("word {i}: {e}"))?;
        let sinks = find_sink_disks(&complex);
        ensure(sinks.is_empty(), || format!("word {i} ({word}): {sinks:?}"))?;
        euler_audit(&complex).map_err(|e| format!("word {i}: {e}"))?;
        for v in complex.sectors_of(SectorKind::Vertical) {
            ensure(
                v.cusp_count(Cusp::In) == 1 && v.cusp_count(Cusp::Out) == 1,
                || format!("word {i}: sector {}", v.id),
            )?;
        }
        levels += seq.len();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SINK_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{SINK_WORDS} words, {levels} levels, {elapsed:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut findings = 0;
    for i in 0..CHECKER_COMPLEXES {
        let complex = random_complex(&mut rng);
        let text = complex.to_string();
        let parsed: BranchedComplex = text.parse().map_err(|e| format!("complex {i}: {e}"))?;
        let got: Vec<(String, bool)> = find_sink_disks(&parsed)
            .into_iter()
            .map(|f| (f.sector, f.kind == SinkKind::HalfSinkDisk))
            .collect();
        let expected = brute_force_sinks(&text);
        ensure(got == expected, || {
            format!("complex {i}: {got:?} != {expected:?}")
        })?;
        findings += got.len();
    }
    Ok(format!(
        "{CHECKER_COMPLEXES} complexes, {findings} findings agree"
    ))
}

fn criterion_4() -> Outcome {
    for g in 1..=4 {
        for k in 2..=5 {
            let s = spec(g, k);
            let (surface, tuple) = standard_parallel_tuple(s).map_err(|e| e.to_string())?;
            let cut = cut_along(&surface, &tuple.arcs).map_err(|e| e.to_string())?;
            let mut types: Vec<_> = cut.components.iter().map(|c| c.topology).collect();
            ensure(types.len() == k, || {
                format!("g={g} k={k}: {} components", types.len())
            })?;
            let big = types
                .iter()
                .position(|t| t.genus == g - 1 && (g > 1 || t.is_annulus()))
                .ok_or_else(|| format!("g={g} k={k}: no genus {} piece", g - 1))?;
            types.remove(big);
            ensure(types.iter().all(|t| t.is_annulus()), || {
                format!("g={g} k={k}: {types:?}")
            })?;
            let total: i64 = cut
                .components
                .iter()
                .map(|c| c.euler_characteristic())
                .sum();
            ensure(total == s.euler_characteristic() + k as i64, || {
                format!("g={g} k={k}: sum chi {total}")
            })?;
            ensure(
                cut.euler_after() == cut.euler_before + k as i64 && cut.crossings == 0,
                || format!("g={g} k={k}: bookkeeping"),
            )?;
        }
    }
    Ok("g in 1..=4, k in 2..=5".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let per_level = ROUND_TRIP_SAMPLES / ROUND_TRIP_LEVELS.len();
    let mut checked = 0;
    for n in ROUND_TRIP_LEVELS {
        let mut done = 0;
        while done < per_level {
            let q: i64 = rng.gen_range(1..=2000);
            let p: i64 = rng.gen_range(-q..=20 * q);
            let m = BigRational::new(p.into(), q.into());
            if m * BigRational::from_integer((n as i64).into())
                <= BigRational::from_integer((-1).into())
            {
                continue;
            }
            let slope = Slope::ratio(p, q);
            let (x, y) = witness_weights(n, &slope).map_err(|e| e.to_string())?;
            let back = slope_of_measure(n, &x, &y).map_err(|e| e.to_string())?;
            ensure(Slope::from(back.clone()) == slope, || {
                format!("n={n}: {slope} came back as {back}")
            })?;
            done += 1;
        }
        checked += done;
        ensure(
            witness_weights(n, &Slope::ratio(-1, n as i64)).is_err(),
            || format!("n={n}: -1/n accepted"),
        )?;
        ensure(witness_weights(n, &Slope::Infinite).is_err(), || {
            format!("n={n}: inf accepted")
        })?;
    }
    Ok(format!("{checked} slopes, tolerance {SLOPE_TOLERANCE}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (alphabet, macros, _) = be_macros().map_err(|e| e.to_string())?;
    for i in 0..ALGEBRA_WORDS {
        let w = random_macro_word(&mut rng, &alphabet, &macros, 12);
        let cancel = w.concat(&w.invert()).reduce();
        ensure(cancel.is_empty(), || {
            format!("word {i}: {w} w^-1 = {cancel}")
        })?;
        let a = expand_macros(&w.invert(), &macros).map_err(|e| e.to_string())?;
        let b = expand_macros(&w, &macros)
            .map_err(|e| e.to_string())?
            .invert()
            .reduce();
        ensure(a == b, || format!("word {i}: {a} != {b}"))?;
    }
    for n in 1..=6 {
        for (k1, k2) in [(0, 0), (1, 0), (-3, 7), (12, -2)] {
            let psi_n = psi().pow(n);
            let full = TwistWord::letter(Letter::Delta(1), k1)
                .concat(&TwistWord::letter(Letter::Delta(2), k2))
                .concat(&psi_n);
            let lhs =
                expand_macros(&full.drop_boundary_twists(), &macros).map_err(|e| e.to_string())?;
            let rhs = expand_macros(&psi_n, &macros).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("n={n} k1={k1} k2={k2}"))?;
        }
    }
    ensure(TwistWord::empty().reduce().syllables().is_empty(), || {
        "empty word".into()
    })?;
    Ok(format!("{ALGEBRA_WORDS} words"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 6] = [
        ("1 example family reproduction", criterion_1),
        ("2 no sink disks on random words", criterion_2),
        ("3 checker agrees with brute force", criterion_3),
        ("4 parallel tuple cut", criterion_4),
        ("5 slope round-trip", criterion_5),
        ("6 word algebra", criterion_6),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
