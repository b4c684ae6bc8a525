//! The pseudo-Anosov family `ψ_{n,k1,k2} = D_{δ1}^{k1} D_{δ2}^{k2} ψⁿ` on
//! the torus with two boundary components, where `ψ = D_a D_b^{-1} D_c D_d^{-1}`.
//!
//! The twist about `d` comes from the star relation with all three alpha
//! curves equal to `a` and the two other boundary curves bounding disks,
//! which leaves `D_d = (D_a^3 D_b)^3`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::branched::{
    build, euler_audit, find_sink_disks, AuditError, AuditReport, BranchedComplex, BranchedError,
    SinkFinding,
};
use crate::sequence::{synthesize, GoodSequence, SequenceError};
use crate::slope::{
    multislope_query, realizable_interval, MultislopeVerdict, Slope, SlopeError, SlopeInterval,
};
use crate::surface::SurfaceSpec;
use crate::words::{
    expand_macros, GervaisAlphabet, Letter, MacroTable, StarRelation, Symbol, TwistWord, WordError,
};

#[derive(Debug, Error)]
pub enum BeError {
    #[error("the power of ψ must be at least 1")]
    ZeroPower,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Branched(#[from] BranchedError),
    #[error(transparent)]
    Audit(#[from] AuditError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error("removing the boundary twists changed the expansion")]
    BoundaryElimination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeInstance {
    pub n: u64,
    pub k1: i64,
    pub k2: i64,
}

impl BeInstance {
    pub fn new(n: u64, k1: i64, k2: i64) -> Result<Self, BeError> {
        if n == 0 {
            return Err(BeError::ZeroPower);
        }
        Ok(Self { n, k1, k2 })
    }
}

#[derive(Debug, Clone)]
pub struct BeReport {
    pub instance: BeInstance,
    pub spec: SurfaceSpec,
    pub macros: MacroTable,
    /// `D_d` solved from the star relation, in terms of `a` and `b`.
    pub d_macro: TwistWord,
    /// The reduced expansion of `(ψⁿ)^{-1}` in the Gervais letters.
    pub inverse_expansion: TwistWord,
    pub sequence: GoodSequence,
    pub complex: BranchedComplex,
    pub sink_disks: Vec<SinkFinding>,
    pub audit: AuditReport,
    pub interval: SlopeInterval,
    /// `(−1/k1, −1/n)` in the adapted basis.
    pub meridional: MultislopeVerdict,
}

impl BeReport {
    pub fn aliases(&self) -> BTreeMap<Letter, String> {
        self.macros.aliases()
    }
}

/// Macros `a`, `b`, `c` and `d` of the example on the torus with two holes.
pub fn be_macros() -> Result<(GervaisAlphabet, MacroTable, TwistWord), WordError> {
    let spec = SurfaceSpec::new(1, 2).expect("torus with two holes is valid");
    let alphabet = GervaisAlphabet::new(spec);
    let mut table = MacroTable::new();
    table.define("a", TwistWord::letter(Letter::Eta(1), 1))?;
    table.define("b", TwistWord::letter(Letter::Beta, 1))?;
    table.define("c", TwistWord::letter(Letter::Eta(2), 1))?;
    let a = Symbol::Macro("a".into());
    let star = StarRelation {
        alphas: [a.clone(), a.clone(), a],
        beta: Symbol::Macro("b".into()),
        gammas: [Some(Symbol::Macro("d".into())), None, None],
    };
    let d = star.solve_for(0);
    table.define("d", d.clone())?;
    Ok((alphabet, table, d))
}

/// `ψ = a b^-1 c d^-1` as a macro word.
pub fn psi() -> TwistWord {
    let m = |name: &str, e| (Symbol::Macro(name.into()), e);
    TwistWord::from_syllables([m("a", 1), m("b", -1), m("c", 1), m("d", -1)])
}

pub fn run_be(instance: BeInstance) -> Result<BeReport, BeError> {
    let (alphabet, macros, d_macro) = be_macros()?;
    let spec = alphabet.spec();
    let power = i64::try_from(instance.n).map_err(|_| BeError::ZeroPower)?;
    let psi_n = psi().pow(power);
    let monodromy = TwistWord::letter(Letter::Delta(1), instance.k1)
        .concat(&TwistWord::letter(Letter::Delta(2), instance.k2))
        .concat(&psi_n);
    // the boundary twists are freely isotopic to the identity
    let expanded = expand_macros(&monodromy.drop_boundary_twists(), &macros)?;
    if expanded != expand_macros(&psi_n, &macros)? {
        return Err(BeError::BoundaryElimination);
    }
    let inverse_expansion = expanded.invert();
    let sequence = synthesize(&inverse_expansion, spec)?;
    let complex = build(&sequence)?;
    let sink_disks = find_sink_disks(&complex);
    let audit = euler_audit(&complex)?;
    let levels = sequence.len() as u64;
    let interval = realizable_interval(levels)?;
    let meridional = multislope_query(
        levels,
        &[Slope::ratio(-1, instance.k1), Slope::ratio(-1, power)],
    )?;
    Ok(BeReport {
        instance,
        spec,
        macros,
        d_macro,
        inverse_expansion,
        sequence,
        complex,
        sink_disks,
        audit,
        interval,
        meridional,
    })
}
