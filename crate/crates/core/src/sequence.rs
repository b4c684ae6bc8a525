//! Good oriented sequences of parallel tuples from a twist word.

use std::fmt;

use thiserror::Error;

use crate::surface::{Sign, SurfaceSpec};
use crate::words::{
    classify_letters, GervaisAlphabet, Letter, Symbol, TwistClass, TwistWord, WordError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("letter `{letter}` does not exist on {spec}")]
    ForeignLetter { letter: Letter, spec: SurfaceSpec },
}

/// Where a step of the sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepOrigin {
    /// Single twist number `unit` of syllable `syllable`, kept as is.
    Twist { syllable: usize, unit: usize },
    /// One of the three steps replacing a minority-sign twist.
    Substituted {
        syllable: usize,
        unit: usize,
        part: usize,
    },
    /// Step of the seed `(α, b(α), α)` used when the word has no `beta`.
    Seed { part: usize },
    /// One of the three steps replacing the minority step of the seed.
    SeedSubstituted { part: usize },
}

impl fmt::Display for StepOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepOrigin::Twist { syllable, unit } => write!(f, "twist {syllable}.{unit}"),
            StepOrigin::Substituted {
                syllable,
                unit,
                part,
            } => write!(f, "substitution {syllable}.{unit}/{part}"),
            StepOrigin::Seed { part } => write!(f, "seed {part}"),
            StepOrigin::SeedSubstituted { part } => write!(f, "seed substitution {part}"),
        }
    }
}

/// A raw step before the signs are made uniform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawStep {
    pub sign: Sign,
    pub origin: StepOrigin,
}

/// A good sequence `(α_0) → … → (α_n)` all of whose pairs share one sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodSequence {
    pub spec: SurfaceSpec,
    pub sign: Sign,
    pub steps: Vec<StepOrigin>,
    pub kept: usize,
    pub substituted: usize,
}

impl GoodSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Makes a nonempty list of signed steps uniform. The majority sign wins,
/// ties go to negative; each minority step `(α, β)` is replaced by the three
/// steps of `(α, −β, −α, β)`, which carry the opposite sign.
pub fn uniformize(spec: SurfaceSpec, raw: &[RawStep]) -> GoodSequence {
    assert!(!raw.is_empty(), "uniformize needs at least one step");
    let positives = raw.iter().filter(|s| s.sign == Sign::Positive).count();
    let negatives = raw.len() - positives;
    let sign = if positives > negatives {
        Sign::Positive
    } else {
        Sign::Negative
    };
    let mut steps = Vec::with_capacity(raw.len());
    let (mut kept, mut substituted) = (0, 0);
    for s in raw {
        if s.sign == sign {
            kept += 1;
            steps.push(s.origin);
            continue;
        }
        substituted += 1;
        steps.extend((0..3).map(|part| match s.origin {
            StepOrigin::Twist { syllable, unit }
            | StepOrigin::Substituted { syllable, unit, .. } => StepOrigin::Substituted {
                syllable,
                unit,
                part,
            },
            StepOrigin::Seed { .. } | StepOrigin::SeedSubstituted { .. } => {
                StepOrigin::SeedSubstituted { part }
            }
        }));
    }
    GoodSequence {
        spec,
        sign,
        steps,
        kept,
        substituted,
    }
}

/// Builds a uniform good sequence from the standard tuple to its image
/// under `word`. Every single `beta` twist contributes one step, read left
/// to right; other letters fix the tuple. A word without `beta` starts from
/// the seed `(α, b(α), b^{-1}b(α))`.
pub fn synthesize(word: &TwistWord, spec: SurfaceSpec) -> Result<GoodSequence, SequenceError> {
    let alphabet = GervaisAlphabet::new(spec);
    for s in word.syllables() {
        match &s.symbol {
            Symbol::Macro(m) => return Err(WordError::UnexpandedMacro(m.clone()).into()),
            Symbol::Letter(l) if !alphabet.contains(*l) => {
                return Err(SequenceError::ForeignLetter { letter: *l, spec })
            }
            Symbol::Letter(_) => {}
        }
    }
    let tags = classify_letters(word)?;
    let twists = word.single_twists()?;
    let raw: Vec<RawStep> = twists
        .iter()
        .zip(tags)
        .filter_map(|(&(syllable, unit, _, _), tag)| {
            let sign = match tag {
                TwistClass::BetaPositive => Sign::Positive,
                TwistClass::BetaNegative => Sign::Negative,
                TwistClass::Disjoint => return None,
            };
            Some(RawStep {
                sign,
                origin: StepOrigin::Twist { syllable, unit },
            })
        })
        .collect();
    if raw.is_empty() {
        let seed = [
            RawStep {
                sign: Sign::Negative,
                origin: StepOrigin::Seed { part: 0 },
            },
            RawStep {
                sign: Sign::Positive,
                origin: StepOrigin::Seed { part: 1 },
            },
        ];
        return Ok(uniformize(spec, &seed));
    }
    Ok(uniformize(spec, &raw))
}
