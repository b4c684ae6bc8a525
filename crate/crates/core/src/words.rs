//! Words in Dehn twists about the preferred generating curves.
//!
//! Words are written left to right and composed right to left: in
//! `h_m … h_2 h_1` the rightmost twist acts first. Equality is syntactic after
//! free reduction; nothing here decides the word problem in the mapping
//! class group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::surface::SurfaceSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown letter or macro `{0}`")]
    UnknownSymbol(String),
    #[error("letter `{name}` does not exist on {spec}")]
    LetterOutOfRange { name: String, spec: SurfaceSpec },
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("malformed exponent in `{0}`")]
    MalformedExponent(String),
    #[error("zero exponent in `{0}`")]
    ZeroExponent(String),
    #[error("macro `{0}` is defined in terms of itself")]
    RecursiveMacro(String),
    #[error("macro `{0}` is not defined")]
    UnresolvedMacro(String),
    #[error("`{0}` is not a valid macro name")]
    InvalidMacroName(String),
    #[error("macro `{0}` is defined twice")]
    DuplicateMacro(String),
    #[error("line {line}: {source}")]
    MacroLine {
        line: usize,
        #[source]
        source: Box<WordError>,
    },
    #[error("word still contains macro `{0}`")]
    UnexpandedMacro(String),
    #[error("word still contains boundary twist `{0}`")]
    BoundaryTwist(String),
}

/// A curve from the preferred generating set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Eta(usize),
    Gamma(usize, usize),
    /// The distinguished curve crossing every arc of the standard tuple once.
    Beta,
    BetaIndexed(usize),
    /// Curve parallel to a boundary component.
    Delta(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Eta(i) => write!(f, "eta{i}"),
            Letter::Gamma(a, b) => write!(f, "gamma{a}{b}"),
            Letter::Beta => f.write_str("beta"),
            Letter::BetaIndexed(i) => write!(f, "beta{i}"),
            Letter::Delta(i) => write!(f, "delta{i}"),
        }
    }
}

/// Position of a generator relative to the standard parallel tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LetterClass {
    /// Crosses every arc of the tuple exactly once.
    Crossing,
    /// Disjoint from every arc of the tuple.
    Disjoint,
    /// Parallel to a boundary component; its twist is freely isotopic to
    /// the identity.
    BoundaryParallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GervaisAlphabet {
    spec: SurfaceSpec,
    letters: Vec<Letter>,
}

impl GervaisAlphabet {
    /// Generators `eta_1 … eta_{2g−2+k}`, `gamma_{12}, gamma_{24}, …,
    /// gamma_{2g−4,2g−2}`, `beta`, `beta_1 … beta_{g−1}`, `delta_1 …
    /// delta_{k−1}`, followed by `delta_k`, the twist about the last
    /// boundary component, which is accepted in words but is not one of the
    /// generators.
    pub fn new(spec: SurfaceSpec) -> Self {
        let (g, k) = (spec.genus(), spec.boundary_count());
        let mut letters: Vec<Letter> = (1..=2 * g - 2 + k).map(Letter::Eta).collect();
        if g >= 2 {
            letters.push(Letter::Gamma(1, 2));
            letters.extend((1..g - 1).map(|i| Letter::Gamma(2 * i, 2 * i + 2)));
        }
        letters.push(Letter::Beta);
        letters.extend((1..g).map(Letter::BetaIndexed));
        letters.extend((1..=k).map(Letter::Delta));
        Self { spec, letters }
    }

    pub fn spec(&self) -> SurfaceSpec {
        self.spec
    }

    /// All letters accepted in words, including `delta_k`.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The generating set proper, `4g + 2k − 4` curves.
    pub fn generators(&self) -> &[Letter] {
        &self.letters[..self.letters.len() - 1]
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.letters.contains(&letter)
    }

    pub fn class(&self, letter: Letter) -> LetterClass {
        match letter {
            Letter::Beta => LetterClass::Crossing,
            Letter::Delta(_) => LetterClass::BoundaryParallel,
            _ => LetterClass::Disjoint,
        }
    }

    pub fn lookup(&self, name: &str) -> Result<Letter, WordError> {
        if let Some(l) = self.letters.iter().find(|l| l.to_string() == name) {
            return Ok(*l);
        }
        if looks_like_letter(name) {
            Err(WordError::LetterOutOfRange {
                name: name.to_string(),
                spec: self.spec,
            })
        } else {
            Err(WordError::UnknownSymbol(name.to_string()))
        }
    }
}

fn looks_like_letter(name: &str) -> bool {
    if name == "beta" {
        return true;
    }
    ["eta", "gamma", "beta", "delta"].iter().any(|p| {
        name.strip_prefix(p)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Letter(Letter),
    Macro(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Letter(l) => write!(f, "{l}"),
            Symbol::Macro(m) => f.write_str(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub symbol: Symbol,
    pub exponent: i64,
}

/// A product of twists, stored left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistWord {
    syllables: Vec<Syllable>,
}

impl TwistWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word; zero exponents are dropped.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (Symbol, i64)>) -> Self {
        Self {
            syllables: syllables
                .into_iter()
                .filter(|(_, e)| *e != 0)
                .map(|(symbol, exponent)| Syllable { symbol, exponent })
                .collect(),
        }
    }

    pub fn letter(letter: Letter, exponent: i64) -> Self {
        Self::from_syllables([(Symbol::Letter(letter), exponent)])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of single twists, `Σ|exponent|`.
    pub fn twist_count(&self) -> u64 {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs())
            .sum()
    }

    /// Merges adjacent syllables on the same symbol and drops zero
    /// exponents, until neither applies.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<Syllable> = Vec::with_capacity(self.syllables.len());
        for s in &self.syllables {
            if s.exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.symbol == s.symbol => {
                    top.exponent += s.exponent;
                    if top.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(s.clone()),
            }
        }
        Self { syllables: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.syllables.iter().all(|s| s.exponent != 0)
            && self
                .syllables
                .windows(2)
                .all(|w| w[0].symbol != w[1].symbol)
    }

    pub fn invert(&self) -> Self {
        Self {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    symbol: s.symbol.clone(),
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut syllables = self.syllables.clone();
        syllables.extend(other.syllables.iter().cloned());
        Self { syllables }
    }

    /// `w^n`, with negative powers taken through the inverse. Not reduced.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut syllables = Vec::with_capacity(base.syllables.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            syllables.extend(base.syllables.iter().cloned());
        }
        Self { syllables }
    }

    pub fn macros(&self) -> BTreeSet<&str> {
        self.syllables
            .iter()
            .filter_map(|s| match &s.symbol {
                Symbol::Macro(m) => Some(m.as_str()),
                Symbol::Letter(_) => None,
            })
            .collect()
    }

    /// Renders letters through `names` where a short name exists.
    pub fn display_with<'a>(
        &'a self,
        names: &'a BTreeMap<Letter, String>,
    ) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }

    /// Drops every boundary-parallel twist, then reduces.
    pub fn drop_boundary_twists(&self) -> Self {
        Self {
            syllables: self
                .syllables
                .iter()
                .filter(|s| !matches!(s.symbol, Symbol::Letter(Letter::Delta(_))))
                .cloned()
                .collect(),
        }
        .reduce()
    }

    /// Iterates over the single twists, `(syllable index, unit index,
    /// letter, ±1)`, left to right.
    pub fn single_twists(&self) -> Result<Vec<(usize, usize, Letter, i64)>, WordError> {
        let mut out = Vec::with_capacity(self.twist_count() as usize);
        for (i, s) in self.syllables.iter().enumerate() {
            let Symbol::Letter(letter) = &s.symbol else {
                return Err(WordError::UnexpandedMacro(s.symbol.to_string()));
            };
            let unit = s.exponent.signum();
            for u in 0..s.exponent.unsigned_abs() as usize {
                out.push((i, u, *letter, unit));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(&BTreeMap::new()).fmt(f)
    }
}

struct WordDisplay<'a> {
    word: &'a TwistWord,
    names: &'a BTreeMap<Letter, String>,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match &s.symbol {
                Symbol::Letter(l) => match self.names.get(l) {
                    Some(n) => f.write_str(n)?,
                    None => write!(f, "{l}")?,
                },
                Symbol::Macro(m) => f.write_str(m)?,
            }
            if s.exponent != 1 {
                write!(f, "^{}", s.exponent)?;
            }
        }
        Ok(())
    }
}

/// What a single twist does to the standard tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistClass {
    /// `(α, b^{-1}(α))` is a good positively oriented pair.
    BetaPositive,
    /// `(α, b(α))` is a good negatively oriented pair.
    BetaNegative,
    /// The twist fixes the tuple.
    Disjoint,
}

/// One tag per single twist, left to right.
pub fn classify_letters(word: &TwistWord) -> Result<Vec<TwistClass>, WordError> {
    word.single_twists()?
        .into_iter()
        .map(|(_, _, letter, sign)| match letter {
            Letter::Beta if sign > 0 => Ok(TwistClass::BetaNegative),
            Letter::Beta => Ok(TwistClass::BetaPositive),
            Letter::Delta(_) => Err(WordError::BoundaryTwist(letter.to_string())),
            _ => Ok(TwistClass::Disjoint),
        })
        .collect()
}

/// User-defined names for twist words, e.g. `a = eta1` or
/// `d = a^3 b a^3 b a^3 b`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MacroTable {
    entries: BTreeMap<String, TwistWord>,
}

impl MacroTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&TwistWord> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn define(&mut self, name: &str, body: TwistWord) -> Result<(), WordError> {
        if !is_identifier(name) || looks_like_letter(name) {
            return Err(WordError::InvalidMacroName(name.to_string()));
        }
        if self.entries.contains_key(name) {
            return Err(WordError::DuplicateMacro(name.to_string()));
        }
        self.entries.insert(name.to_string(), body);
        self.check_acyclic()
    }

    /// Short names of macros whose body is a single letter, for display.
    pub fn aliases(&self) -> BTreeMap<Letter, String> {
        let mut out = BTreeMap::new();
        for (name, body) in &self.entries {
            if let [Syllable {
                symbol: Symbol::Letter(l),
                exponent: 1,
            }] = body.syllables()
            {
                out.entry(*l).or_insert_with(|| name.clone());
            }
        }
        out
    }

    fn check_acyclic(&self) -> Result<(), WordError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit<'a>(
            table: &'a MacroTable,
            name: &'a str,
            marks: &mut BTreeMap<&'a str, Mark>,
        ) -> Result<(), WordError> {
            match marks.get(name) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Open) => return Err(WordError::RecursiveMacro(name.to_string())),
                None => {}
            }
            marks.insert(name, Mark::Open);
            if let Some(body) = table.entries.get(name) {
                for m in body.macros() {
                    visit(table, m, marks)?;
                }
            }
            marks.insert(name, Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        for name in self.entries.keys() {
            visit(self, name, &mut marks)?;
        }
        Ok(())
    }

    /// Parses `name = word` lines. Blank lines and `#` comments are skipped;
    /// bodies may refer to macros defined anywhere in the file.
    pub fn parse(text: &str, alphabet: &GervaisAlphabet) -> Result<Self, WordError> {
        let at = |line: usize| {
            move |e: WordError| WordError::MacroLine {
                line,
                source: Box::new(e),
            }
        };
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((name, body)) = content.split_once('=') else {
                return Err(at(i + 1)(WordError::MalformedToken(content.to_string())));
            };
            lines.push((i + 1, name.trim().to_string(), body.trim().to_string()));
        }
        let names: BTreeSet<&str> = lines.iter().map(|(_, n, _)| n.as_str()).collect();
        let mut table = MacroTable::new();
        for (line, name, body) in &lines {
            let word = parse_tokens(body, alphabet, |m| names.contains(m)).map_err(at(*line))?;
            if !is_identifier(name) || looks_like_letter(name) {
                return Err(at(*line)(WordError::InvalidMacroName(name.clone())));
            }
            if table.entries.insert(name.clone(), word).is_some() {
                return Err(at(*line)(WordError::DuplicateMacro(name.clone())));
            }
        }
        table.check_acyclic()?;
        Ok(table)
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses whitespace-separated tokens `name` or `name^n` (`n` a nonzero
/// integer). Names resolve to macros first, then to letters of the
/// alphabet. The result is not reduced.
pub fn parse_word(
    text: &str,
    alphabet: &GervaisAlphabet,
    macros: &MacroTable,
) -> Result<TwistWord, WordError> {
    parse_tokens(text, alphabet, |m| macros.contains(m))
}

fn parse_tokens(
    text: &str,
    alphabet: &GervaisAlphabet,
    is_macro: impl Fn(&str) -> bool,
) -> Result<TwistWord, WordError> {
    let mut syllables = Vec::new();
    for token in text.split_whitespace() {
        let (name, exponent) = match token.split_once('^') {
            Some((name, exp)) => {
                let exp = exp.strip_prefix('+').unwrap_or(exp);
                let digits = exp.strip_prefix('-').unwrap_or(exp);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(WordError::MalformedExponent(token.to_string()));
                }
                let value: i64 = exp
                    .parse()
                    .map_err(|_| WordError::MalformedExponent(token.to_string()))?;
                if value == 0 {
                    return Err(WordError::ZeroExponent(token.to_string()));
                }
                (name, value)
            }
            None => (token, 1),
        };
        if !is_identifier(name) {
            return Err(WordError::MalformedToken(token.to_string()));
        }
        let symbol = if is_macro(name) {
            Symbol::Macro(name.to_string())
        } else {
            Symbol::Letter(alphabet.lookup(name)?)
        };
        syllables.push(Syllable { symbol, exponent });
    }
    Ok(TwistWord { syllables })
}

/// Replaces every macro by its body (inverted and repeated according to the
/// exponent) until only letters remain, then reduces.
pub fn expand_macros(word: &TwistWord, table: &MacroTable) -> Result<TwistWord, WordError> {
    fn go(
        word: &TwistWord,
        table: &MacroTable,
        stack: &mut Vec<String>,
        out: &mut Vec<Syllable>,
    ) -> Result<(), WordError> {
        for s in &word.syllables {
            match &s.symbol {
                Symbol::Letter(_) => out.push(s.clone()),
                Symbol::Macro(name) => {
                    if stack.contains(name) {
                        return Err(WordError::RecursiveMacro(name.clone()));
                    }
                    let body = table
                        .get(name)
                        .ok_or_else(|| WordError::UnresolvedMacro(name.clone()))?;
                    stack.push(name.clone());
                    go(&body.pow(s.exponent), table, stack, out)?;
                    stack.pop();
                }
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(word, table, &mut Vec::new(), &mut out)?;
    Ok(TwistWord { syllables: out }.reduce())
}

/// An instance of the star relation
/// `(D_{a1} D_{a2} D_{a3} D_b)^3 = D_{c1} D_{c2} D_{c3}` on a subsurface of
/// genus one with three boundary components. Boundary curves that bound
/// disks in the ambient surface are given as `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarRelation {
    pub alphas: [Symbol; 3],
    pub beta: Symbol,
    pub gammas: [Option<Symbol>; 3],
}

impl StarRelation {
    /// Solves for the twist about `gammas[index]`. The three boundary
    /// curves are disjoint, so their twists commute.
    pub fn solve_for(&self, index: usize) -> TwistWord {
        let one = |s: &Symbol| (s.clone(), 1);
        let block = TwistWord::from_syllables(
            self.alphas
                .iter()
                .map(one)
                .chain(std::iter::once(one(&self.beta))),
        );
        let mut word = block.pow(3);
        for (i, g) in self.gammas.iter().enumerate().rev() {
            if let (Some(g), true) = (g, i != index) {
                word = word.concat(&TwistWord::from_syllables([(g.clone(), -1)]));
            }
        }
        word.reduce()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet(g: usize, k: usize) -> GervaisAlphabet {
        GervaisAlphabet::new(SurfaceSpec::new(g, k).unwrap())
    }

    fn be_macros() -> MacroTable {
        MacroTable::parse(
            "a = eta1\nb = beta\nc = eta2\nd = a^3 b a^3 b a^3 b\n",
            &alphabet(1, 2),
        )
        .unwrap()
    }

    fn w(text: &str) -> TwistWord {
        parse_word(text, &alphabet(1, 2), &be_macros()).unwrap()
    }

    #[test]
    fn alphabet_sizes() {
        for g in 1..=5 {
            for k in 2..=5 {
                let a = alphabet(g, k);
                assert_eq!(a.generators().len(), 4 * g + 2 * k - 4, "g={g} k={k}");
                assert_eq!(
                    a.letters().iter().filter(|l| **l == Letter::Beta).count(),
                    1
                );
            }
        }
        let a = alphabet(3, 2);
        let names: Vec<String> = a.generators().iter().map(|l| l.to_string()).collect();
        assert_eq!(
            names,
            [
                "eta1", "eta2", "eta3", "eta4", "eta5", "eta6", "gamma12", "gamma24", "beta",
                "beta1", "beta2", "delta1"
            ]
        );
    }

    #[test]
    fn parses_alias_word() {
        let word = w("a b^-1 c d^-1");
        assert_eq!(word.syllables().len(), 4);
        assert_eq!(word.to_string(), "a b^-1 c d^-1");
        assert!(w("").is_empty());
    }

    #[test]
    fn parse_errors() {
        let a = alphabet(1, 2);
        let m = MacroTable::new();
        assert_eq!(
            parse_word("beta^0", &a, &m),
            Err(WordError::ZeroExponent("beta^0".into()))
        );
        assert!(matches!(
            parse_word("beta^x", &a, &m),
            Err(WordError::MalformedExponent(_))
        ));
        assert!(matches!(
            parse_word("beta^", &a, &m),
            Err(WordError::MalformedExponent(_))
        ));
        assert!(matches!(
            parse_word("eta9", &a, &m),
            Err(WordError::LetterOutOfRange { .. })
        ));
        assert!(matches!(
            parse_word("gamma12", &a, &m),
            Err(WordError::LetterOutOfRange { .. })
        ));
        assert!(matches!(
            parse_word("zeta", &a, &m),
            Err(WordError::UnknownSymbol(_))
        ));
        assert_eq!(
            parse_word("beta^+2 eta1^-3", &a, &m).unwrap().to_string(),
            "beta^2 eta1^-3"
        );
    }

    #[test]
    fn invert_and_reduce() {
        assert_eq!(w("a b^-1").invert().to_string(), "b a^-1");
        assert!(w("b b^-1").reduce().is_empty());
        assert_eq!(w("a a^2 b a^-3").reduce().to_string(), "a^3 b a^-3");
    }

    #[test]
    fn star_relation_gives_d() {
        let a = Symbol::Macro("a".into());
        let star = StarRelation {
            alphas: [a.clone(), a.clone(), a],
            beta: Symbol::Macro("b".into()),
            gammas: [Some(Symbol::Macro("d".into())), None, None],
        };
        assert_eq!(star.solve_for(0).to_string(), "a^3 b a^3 b a^3 b");
    }

    #[test]
    fn expansion_of_psi_inverse() {
        let table = be_macros();
        let names = table.aliases();
        let psi = expand_macros(&w("a b^-1 c d^-1"), &table).unwrap();
        assert_eq!(
            psi.invert().display_with(&names).to_string(),
            "a^3 b a^3 b a^3 b c^-1 b a^-1"
        );
        let d_inv = expand_macros(&w("d^-1"), &table).unwrap();
        assert_eq!(
            d_inv.display_with(&names).to_string(),
            "b^-1 a^-3 b^-1 a^-3 b^-1 a^-3"
        );
        let plain = w("a^3 c^-1");
        assert_eq!(
            expand_macros(&plain, &table)
                .unwrap()
                .display_with(&names)
                .to_string(),
            "a^3 c^-1"
        );
    }

    #[test]
    fn recursive_macros_are_rejected() {
        let a = alphabet(1, 2);
        assert!(matches!(
            MacroTable::parse("x = y\ny = x beta\n", &a),
            Err(WordError::RecursiveMacro(_))
        ));
        assert!(matches!(
            MacroTable::parse("beta = eta1\n", &a),
            Err(WordError::MacroLine { line: 1, .. })
        ));
        let mut t = MacroTable::new();
        t.define(
            "x",
            TwistWord::from_syllables([(Symbol::Macro("x".into()), 1)]),
        )
        .unwrap_err();
    }

    #[test]
    fn unresolved_macro() {
        let word = TwistWord::from_syllables([(Symbol::Macro("q".into()), 1)]);
        assert_eq!(
            expand_macros(&word, &MacroTable::new()),
            Err(WordError::UnresolvedMacro("q".into()))
        );
    }

    #[test]
    fn boundary_twists_drop_out() {
        let table = be_macros();
        let psi = expand_macros(&w("a b^-1 c d^-1"), &table).unwrap();
        let full = parse_word("delta1^3 delta2^-2", &alphabet(1, 2), &table)
            .unwrap()
            .concat(&psi.pow(2));
        assert_eq!(full.drop_boundary_twists(), psi.pow(2).reduce());
        assert!(parse_word("delta1^3", &alphabet(1, 2), &table)
            .unwrap()
            .drop_boundary_twists()
            .is_empty());
        assert_eq!(psi.drop_boundary_twists(), psi);
    }

    #[test]
    fn classification() {
        let table = be_macros();
        let psi_inv = expand_macros(&w("a b^-1 c d^-1"), &table).unwrap().invert();
        let tags = classify_letters(&psi_inv).unwrap();
        let betas: Vec<_> = tags
            .iter()
            .filter(|t| **t != TwistClass::Disjoint)
            .collect();
        assert_eq!(betas.len(), 4);
        assert!(betas.iter().all(|t| **t == TwistClass::BetaNegative));
        assert_eq!(tags.len() as u64, psi_inv.twist_count());

        let a = alphabet(1, 2);
        let m = MacroTable::new();
        let disjoint = parse_word("eta1^3 eta2^-1", &a, &m).unwrap();
        assert!(classify_letters(&disjoint)
            .unwrap()
            .iter()
            .all(|t| *t == TwistClass::Disjoint));
        let mixed = parse_word("beta^-1 beta", &a, &m).unwrap();
        assert_eq!(
            classify_letters(&mixed).unwrap(),
            [TwistClass::BetaPositive, TwistClass::BetaNegative]
        );
        assert!(matches!(
            classify_letters(&w("d")),
            Err(WordError::UnexpandedMacro(_))
        ));
        let delta = parse_word("delta1", &a, &m).unwrap();
        assert!(matches!(
            classify_letters(&delta),
            Err(WordError::BoundaryTwist(_))
        ));
    }
}
