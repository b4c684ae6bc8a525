//! Exact slope arithmetic on the boundary tori.
//!
//! The slope of the class `pλ + qμ` is `q/p`: the fiber boundary `λ` has
//! slope 0 and the meridian has slope `∞`. Unless stated otherwise slopes are
//! taken in the basis `(λ, μ₀)` adapted to the branched surface.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error("cannot parse `{0}` as a slope (expected p/q, an integer or inf)")]
    Parse(String),
    #[error("number of levels must be positive")]
    ZeroLevels,
    #[error("weights must be positive, found x = {x}, y = {y}")]
    NonPositiveWeight {
        x: Box<BigRational>,
        y: Box<BigRational>,
    },
    #[error("slope {slope} lies outside the realizable interval {interval}")]
    OutsideInterval {
        slope: Box<Slope>,
        interval: Box<SlopeInterval>,
    },
    #[error("expected {expected} slopes, found {found}")]
    Arity { expected: usize, found: usize },
}

/// A point of `ℚ ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(BigRational),
    Infinite,
}

impl Slope {
    pub fn zero() -> Self {
        Slope::Finite(BigRational::zero())
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        if q == 0 {
            Slope::Infinite
        } else {
            Slope::Finite(BigRational::new(p.into(), q.into()))
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Slope::Finite(r) => Some(r),
            Slope::Infinite => None,
        }
    }
}

impl From<BigRational> for Slope {
    fn from(r: BigRational) -> Self {
        Slope::Finite(r)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{r}"),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        if t == "inf" || t == "∞" {
            return Ok(Slope::Infinite);
        }
        let bad = || SlopeError::Parse(text.to_string());
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Slope::Finite(BigRational::new(p, q)))
    }
}

/// Which meridian slopes are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Basis {
    /// `(λ, μ₀)`, adapted to the construction.
    #[default]
    Adapted,
    /// `(λ, μ)` with `μ = μ₀ + c·λ`.
    Offset(i64),
}

impl Basis {
    /// Rewrites a slope given in this basis in the adapted basis.
    pub fn to_adapted(self, s: &Slope) -> Slope {
        match self {
            Basis::Adapted => s.clone(),
            Basis::Offset(c) => change_coords(s, c),
        }
    }
}

/// Open interval `(lower, ∞)` of slopes carried by a boundary train track.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlopeInterval {
    pub lower: BigRational,
}

impl SlopeInterval {
    pub fn contains(&self, s: &Slope) -> bool {
        matches!(s, Slope::Finite(r) if *r > self.lower)
    }
}

impl fmt::Display for SlopeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, inf)", self.lower)
    }
}

fn levels(n: u64) -> Result<BigRational, SlopeError> {
    if n == 0 {
        return Err(SlopeError::ZeroLevels);
    }
    Ok(BigRational::from_integer(n.into()))
}

/// `(x − y) / (n(1 + y))` for positive weights.
pub fn slope_of_measure(
    n: u64,
    x: &BigRational,
    y: &BigRational,
) -> Result<BigRational, SlopeError> {
    let n = levels(n)?;
    if !x.is_positive() || !y.is_positive() {
        return Err(SlopeError::NonPositiveWeight {
            x: Box::new(x.clone()),
            y: Box::new(y.clone()),
        });
    }
    Ok((x - y) / (n * (BigRational::one() + y)))
}

/// `(−1/n, ∞)`.
pub fn realizable_interval(n: u64) -> Result<SlopeInterval, SlopeError> {
    Ok(SlopeInterval {
        lower: -levels(n)?.recip(),
    })
}

/// Weights `(x, y)` realizing `m`, chosen by a fixed rule: `y = 1` when
/// `m ≥ 0`, `x = −nm` otherwise.
pub fn witness_weights(n: u64, m: &Slope) -> Result<(BigRational, BigRational), SlopeError> {
    let interval = realizable_interval(n)?;
    let r = match m {
        Slope::Finite(r) if interval.contains(m) => r,
        _ => {
            return Err(SlopeError::OutsideInterval {
                slope: Box::new(m.clone()),
                interval: Box::new(interval),
            })
        }
    };
    let n = levels(n)?;
    let one = BigRational::one();
    if !r.is_negative() {
        let two = BigRational::from_integer(2.into());
        Ok((&one + two * &n * r, one))
    } else {
        let nm = &n * r;
        let y = (-BigRational::from_integer(2.into()) * &nm) / (&one + &nm);
        Ok((-nm, y))
    }
}

/// Slope of the same curve after the meridian change `μ = μ₀ + c·λ`:
/// `s ↦ s/(1 + c·s)`, so `∞ ↦ 1/c` and `−1/c ↦ ∞`.
pub fn change_coords(s: &Slope, c: i64) -> Slope {
    let c = BigRational::from_integer(c.into());
    match s {
        Slope::Infinite if c.is_zero() => Slope::Infinite,
        Slope::Infinite => Slope::Finite(c.recip()),
        Slope::Finite(r) => {
            let denom = BigRational::one() + &c * r;
            if denom.is_zero() {
                Slope::Infinite
            } else {
                Slope::Finite(r / denom)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentVerdict {
    Realized { x: BigRational, y: BigRational },
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultislopeVerdict {
    pub interval: SlopeInterval,
    /// Slopes in the adapted basis.
    pub slopes: Vec<Slope>,
    pub components: Vec<ComponentVerdict>,
}

impl MultislopeVerdict {
    pub fn is_realizable(&self) -> bool {
        self.components
            .iter()
            .all(|c| matches!(c, ComponentVerdict::Realized { .. }))
    }

    /// 1-based indices of the components outside the interval.
    pub fn rejected(&self) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, ComponentVerdict::Rejected))
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Tests each component of a multislope (adapted basis) against `(−1/n, ∞)`.
pub fn multislope_query(n: u64, slopes: &[Slope]) -> Result<MultislopeVerdict, SlopeError> {
    let interval = realizable_interval(n)?;
    let components = slopes
        .iter()
        .map(|m| match witness_weights(n, m) {
            Ok((x, y)) => Ok(ComponentVerdict::Realized { x, y }),
            Err(SlopeError::OutsideInterval { .. }) => Ok(ComponentVerdict::Rejected),
            Err(e) => Err(e),
        })
        .collect::<Result<_, _>>()?;
    Ok(MultislopeVerdict {
        interval,
        slopes: slopes.to_vec(),
        components,
    })
}

/// Like [`multislope_query`], with one basis per boundary component.
pub fn multislope_query_in(
    n: u64,
    slopes: &[Slope],
    bases: &[Basis],
) -> Result<MultislopeVerdict, SlopeError> {
    if bases.len() != slopes.len() {
        return Err(SlopeError::Arity {
            expected: slopes.len(),
            found: bases.len(),
        });
    }
    let adapted: Vec<Slope> = slopes
        .iter()
        .zip(bases)
        .map(|(s, b)| b.to_adapted(s))
        .collect();
    multislope_query(n, &adapted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn formula_examples() {
        assert_eq!(slope_of_measure(4, &q(1, 1), &q(1, 1)).unwrap(), q(0, 1));
        assert_eq!(slope_of_measure(4, &q(5, 1), &q(1, 1)).unwrap(), q(1, 2));
        assert_eq!(slope_of_measure(4, &q(1, 2), &q(2, 1)).unwrap(), q(-1, 8));
        assert!(slope_of_measure(4, &q(0, 1), &q(1, 1)).is_err());
        assert!(slope_of_measure(0, &q(1, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn intervals() {
        assert_eq!(realizable_interval(4).unwrap().to_string(), "(-1/4, inf)");
        assert_eq!(realizable_interval(1).unwrap().lower, q(-1, 1));
    }

    #[test]
    fn witnesses() {
        assert_eq!(
            witness_weights(4, &Slope::zero()).unwrap(),
            (q(1, 1), q(1, 1))
        );
        assert_eq!(
            witness_weights(4, &Slope::ratio(-1, 8)).unwrap(),
            (q(1, 2), q(2, 1))
        );
        let err = witness_weights(4, &Slope::ratio(-1, 4)).unwrap_err();
        assert!(err.to_string().contains("(-1/4, inf)"));
        assert!(witness_weights(4, &Slope::Infinite).is_err());
    }

    #[test]
    fn coordinate_changes() {
        assert_eq!(change_coords(&Slope::zero(), 7), Slope::zero());
        assert_eq!(change_coords(&Slope::Infinite, 3), Slope::ratio(1, 3));
        assert_eq!(change_coords(&Slope::ratio(-1, 3), 3), Slope::Infinite);
        assert_eq!(change_coords(&Slope::Infinite, 0), Slope::Infinite);
        let s = Slope::ratio(5, 7);
        assert_eq!(change_coords(&change_coords(&s, 4), -4), s);
    }

    #[test]
    fn queries() {
        let v = multislope_query(4, &[Slope::zero(), Slope::zero()]).unwrap();
        assert!(v.is_realizable());
        let v = multislope_query(4, &[Slope::ratio(1, 3), Slope::ratio(-1, 5)]).unwrap();
        for (c, m) in v.components.iter().zip(&v.slopes) {
            let ComponentVerdict::Realized { x, y } = c else {
                panic!("rejected")
            };
            assert_eq!(Slope::from(slope_of_measure(4, x, y).unwrap()), *m);
        }
        let v = multislope_query(4, &[Slope::ratio(-1, 4), Slope::zero()]).unwrap();
        assert_eq!(v.rejected(), vec![1]);
        let v = multislope_query(8, &[Slope::ratio(-1, 3), Slope::ratio(-1, 2)]).unwrap();
        assert_eq!(v.rejected(), vec![1, 2]);
    }

    #[test]
    fn meridian_offset() {
        // the user's meridian is slope 1/2 in the adapted basis
        let v = multislope_query_in(4, &[Slope::Infinite], &[Basis::Offset(2)]).unwrap();
        assert_eq!(v.slopes, vec![Slope::ratio(1, 2)]);
        assert!(v.is_realizable());
    }

    #[test]
    fn parse() {
        assert_eq!("-1/8".parse::<Slope>().unwrap(), Slope::ratio(-1, 8));
        assert_eq!("3".parse::<Slope>().unwrap(), Slope::ratio(3, 1));
        assert_eq!("inf".parse::<Slope>().unwrap(), Slope::Infinite);
        assert_eq!("2/4".parse::<Slope>().unwrap().to_string(), "1/2");
        for bad in ["", "1/0", "x", "1/2/3"] {
            assert!(bad.parse::<Slope>().is_err(), "{bad}");
        }
    }
}
