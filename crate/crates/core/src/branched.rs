//! The branched surface associated with a good oriented sequence, and the
//! sink disk checker.
//!
//! Level `i` of the complex is the fiber copy `F_i` cut along the previous
//! tuple `α_{i−1}` and the current tuple `α_i`, plus the product disks
//! `D_i^j = α_i^j × [i/n, (i+1)/n]`. Since consecutive tuples form a good
//! pair of the sequence sign, every level is the canonical good pair of that
//! sign cut open, with the previous tuple in the alpha role and the current
//! one in the beta role.
//!
//! Cusp labels follow the transverse orientation of the fibers (increasing
//! `t`). A product disk sees an inward cusp along its bottom arc and an
//! outward cusp along its top arc. On a fiber, the branch arc where `D_i^j`
//! leaves `F_i` points to the right of `α_i^j` and the branch arc where
//! `D_{i−1}^j` arrives points to the left of `α_{i−1}^j`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::sequence::GoodSequence;
use crate::surface::{
    canonical_good_pair, cut_along, Side, Sign, SurfaceError, SurfaceSpec, SurfaceType,
};

/// Laminarity conditions checked by [`find_sink_disks`].
pub const CERTIFIED_CONDITIONS: &[&str] = &["no sink disk", "no half sink disk"];

/// Laminarity conditions the construction relies on without checking them.
pub const INHERITED_CONDITIONS: &[&str] = &[
    "no trivial bubble (excluded by construction)",
    "incompressible horizontal boundary",
    "no monogon",
    "no Reeb component",
];

#[derive(Debug, Error)]
pub enum BranchedError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cusp {
    In,
    Out,
}

impl Cusp {
    pub fn as_str(self) -> &'static str {
        match self {
            Cusp::In => "in",
            Cusp::Out => "out",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TupleRole {
    /// `α_{i−1}`, the top arcs of the product disks arriving at `F_i`.
    Previous,
    /// `α_i`, the bottom arcs of the product disks leaving `F_i`.
    Current,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentLocus {
    Bottom,
    Top,
    Arc {
        role: TupleRole,
        arc: usize,
        piece: usize,
        side: Side,
    },
    Unlabeled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BranchSegment {
    pub locus: SegmentLocus,
    pub cusp: Cusp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorKind {
    Vertical,
    Horizontal,
    Other,
}

impl SectorKind {
    fn as_str(self) -> &'static str {
        match self {
            SectorKind::Vertical => "vertical",
            SectorKind::Horizontal => "horizontal",
            SectorKind::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub id: String,
    pub kind: SectorKind,
    pub level: Option<usize>,
    pub topology: SurfaceType,
    pub meets_boundary: bool,
    pub segments: Vec<BranchSegment>,
}

impl Sector {
    pub fn cusp_count(&self, cusp: Cusp) -> usize {
        self.segments.iter().filter(|s| s.cusp == cusp).count()
    }
}

/// Level structure of a complex built from a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fiber {
    pub spec: SurfaceSpec,
    pub levels: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchedComplex {
    pub fiber: Option<Fiber>,
    pub sectors: Vec<Sector>,
}

impl BranchedComplex {
    pub fn sectors_of(&self, kind: SectorKind) -> impl Iterator<Item = &Sector> {
        self.sectors.iter().filter(move |s| s.kind == kind)
    }

    pub fn sector(&self, id: &str) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.id == id)
    }
}

/// Builds the complex for a uniform good sequence.
pub fn build(seq: &GoodSequence) -> Result<BranchedComplex, BranchedError> {
    let spec = seq.spec;
    let k = spec.boundary_count();
    let config = canonical_good_pair(spec, seq.sign)?;
    let cut = cut_along(&config.surface, &config.all_arcs())?;

    let template: Vec<(SurfaceType, bool, Vec<BranchSegment>)> = cut
        .components
        .iter()
        .map(|comp| {
            let mut segments: Vec<BranchSegment> =
                comp.arc_sides
                    .iter()
                    .map(|s| {
                        let (role, arc) = if s.arc < k {
                            (TupleRole::Previous, s.arc)
                        } else {
                            (TupleRole::Current, s.arc - k)
                        };
                        let cusp = match (role, s.side) {
                            (TupleRole::Current, Side::Right)
                            | (TupleRole::Previous, Side::Left) => Cusp::In,
                            _ => Cusp::Out,
                        };
                        BranchSegment {
                            locus: SegmentLocus::Arc {
                                role,
                                arc,
                                piece: s.piece,
                                side: s.side,
                            },
                            cusp,
                        }
                    })
                    .collect();
            segments.dedup();
            (comp.topology, comp.meets_boundary, segments)
        })
        .collect();

    let mut sectors = Vec::with_capacity(seq.len() * (k + template.len()));
    for level in 0..seq.len() {
        for (c, (topology, meets_boundary, segments)) in template.iter().enumerate() {
            sectors.push(Sector {
                id: format!("H{level}.{c}"),
                kind: SectorKind::Horizontal,
                level: Some(level),
                topology: *topology,
                meets_boundary: *meets_boundary,
                segments: segments.clone(),
            });
        }
        for j in 0..k {
            sectors.push(Sector {
                id: format!("V{level}.{}", j + 1),
                kind: SectorKind::Vertical,
                level: Some(level),
                topology: SurfaceType {
                    genus: 0,
                    boundary_count: 1,
                },
                meets_boundary: true,
                segments: vec![
                    BranchSegment {
                        locus: SegmentLocus::Bottom,
                        cusp: Cusp::In,
                    },
                    BranchSegment {
                        locus: SegmentLocus::Top,
                        cusp: Cusp::Out,
                    },
                ],
            });
        }
    }
    Ok(BranchedComplex {
        fiber: Some(Fiber {
            spec,
            levels: seq.len(),
            sign: seq.sign,
        }),
        sectors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SinkKind {
    SinkDisk,
    HalfSinkDisk,
}

impl fmt::Display for SinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SinkKind::SinkDisk => "sink disk",
            SinkKind::HalfSinkDisk => "half sink disk",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkFinding {
    pub sector: String,
    pub kind: SinkKind,
}

/// Disk sectors all of whose branch segments carry inward cusps; those that
/// meet `∂M` are reported as half sink disks.
pub fn find_sink_disks(complex: &BranchedComplex) -> Vec<SinkFinding> {
    complex
        .sectors
        .iter()
        .filter(|s| s.topology.is_disk() && s.segments.iter().all(|seg| seg.cusp == Cusp::In))
        .map(|s| SinkFinding {
            sector: s.id.clone(),
            kind: if s.meets_boundary {
                SinkKind::HalfSinkDisk
            } else {
                SinkKind::SinkDisk
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAudit {
    pub level: usize,
    pub horizontal_euler: i64,
    pub expected_euler: i64,
    pub vertical_disks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub levels: Vec<LevelAudit>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("complex has no level structure to audit")]
    NoFiber,
    #[error("level {level}: horizontal sectors have χ = {found}, expected {expected}")]
    EulerMismatch {
        level: usize,
        found: i64,
        expected: i64,
    },
    #[error("level {level}: {found} product disks, expected {expected}")]
    VerticalCount {
        level: usize,
        found: usize,
        expected: usize,
    },
    #[error("sector {0} is vertical but not a disk with one inward and one outward cusp")]
    VerticalShape(String),
}

/// Per-level Euler bookkeeping: the horizontal sectors of a level are `F`
/// cut along `2k` arcs meeting in `k(k−1)` points, so their Euler
/// characteristics add up to `χ(F) + 2k + k(k−1)`.
pub fn euler_audit(complex: &BranchedComplex) -> Result<AuditReport, AuditError> {
    let fiber = complex.fiber.ok_or(AuditError::NoFiber)?;
    let k = fiber.spec.boundary_count() as i64;
    let expected = fiber.spec.euler_characteristic() + 2 * k + k * (k - 1);
    let mut levels = Vec::with_capacity(fiber.levels);
    for level in 0..fiber.levels {
        let at = |kind| {
            complex
                .sectors_of(kind)
                .filter(move |s| s.level == Some(level))
        };
        let found: i64 = at(SectorKind::Horizontal)
            .map(|s| s.topology.euler_characteristic())
            .sum();
        if found != expected {
            return Err(AuditError::EulerMismatch {
                level,
                found,
                expected,
            });
        }
        let mut vertical = 0;
        for s in at(SectorKind::Vertical) {
            if !s.topology.is_disk() || s.cusp_count(Cusp::In) != 1 || s.cusp_count(Cusp::Out) != 1
            {
                return Err(AuditError::VerticalShape(s.id.clone()));
            }
            vertical += 1;
        }
        if vertical != k as usize {
            return Err(AuditError::VerticalCount {
                level,
                found: vertical,
                expected: k as usize,
            });
        }
        levels.push(LevelAudit {
            level,
            horizontal_euler: found,
            expected_euler: expected,
            vertical_disks: vertical,
        });
    }
    Ok(AuditReport { levels })
}

impl fmt::Display for BranchedComplex {
    /// Line-oriented description readable by [`BranchedComplex::from_str`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(fb) = self.fiber {
            writeln!(
                f,
                "complex genus={} boundary={} levels={} sign={}",
                fb.spec.genus(),
                fb.spec.boundary_count(),
                fb.levels,
                fb.sign
            )?;
        }
        for s in &self.sectors {
            let mut cusps = String::new();
            for (i, seg) in s.segments.iter().enumerate() {
                if i > 0 {
                    cusps.push(',');
                }
                cusps.push_str(seg.cusp.as_str());
            }
            if cusps.is_empty() {
                cusps.push('-');
            }
            let level = s.level.map_or_else(|| "-".to_string(), |l| l.to_string());
            let mut line = String::new();
            let _ = write!(
                line,
                "sector id={} kind={} level={} type={} dm={} cusps={}",
                s.id,
                s.kind.as_str(),
                level,
                s.topology,
                if s.meets_boundary { "yes" } else { "no" },
                cusps
            );
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for BranchedComplex {
    type Err = BranchedError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut fiber = None;
        let mut sectors: Vec<Sector> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| BranchedError::Format { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            let head = tokens.next().unwrap_or_default();
            let mut fields = std::collections::BTreeMap::new();
            for t in tokens {
                let (key, value) = t
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected key=value, found `{t}`")))?;
                if fields.insert(key, value).is_some() {
                    return Err(err(format!("duplicate field `{key}`")));
                }
            }
            let field = |key: &str| {
                fields
                    .get(key)
                    .copied()
                    .ok_or_else(|| err(format!("missing field `{key}`")))
            };
            let number = |key: &str| -> Result<usize, BranchedError> {
                field(key)?
                    .parse()
                    .map_err(|_| err(format!("field `{key}` is not a number")))
            };
            match head {
                "complex" => {
                    if fiber.is_some() || !sectors.is_empty() {
                        return Err(err("`complex` header must come first and only once".into()));
                    }
                    let spec = SurfaceSpec::new(number("genus")?, number("boundary")?)
                        .map_err(|e| err(e.to_string()))?;
                    let sign = match field("sign")? {
                        "positive" => Sign::Positive,
                        "negative" => Sign::Negative,
                        other => return Err(err(format!("unknown sign `{other}`"))),
                    };
                    fiber = Some(Fiber {
                        spec,
                        levels: number("levels")?,
                        sign,
                    });
                }
                "sector" => {
                    let id = field("id")?.to_string();
                    if sectors.iter().any(|s| s.id == id) {
                        return Err(err(format!("duplicate sector id `{id}`")));
                    }
                    let kind = match field("kind")? {
                        "vertical" => SectorKind::Vertical,
                        "horizontal" => SectorKind::Horizontal,
                        "other" => SectorKind::Other,
                        other => return Err(err(format!("unknown kind `{other}`"))),
                    };
                    let level = match field("level")? {
                        "-" => None,
                        _ => Some(number("level")?),
                    };
                    let topology = parse_type(field("type")?)
                        .ok_or_else(|| err(format!("unknown type `{}`", fields["type"])))?;
                    let meets_boundary = match field("dm")? {
                        "yes" => true,
                        "no" => false,
                        other => return Err(err(format!("dm must be yes or no, found `{other}`"))),
                    };
                    let cusps = field("cusps")?;
                    let mut segments = Vec::new();
                    if cusps != "-" {
                        for c in cusps.split(',') {
                            let cusp = match c {
                                "in" => Cusp::In,
                                "out" => Cusp::Out,
                                other => return Err(err(format!("unknown cusp `{other}`"))),
                            };
                            segments.push(BranchSegment {
                                locus: SegmentLocus::Unlabeled,
                                cusp,
                            });
                        }
                    }
                    sectors.push(Sector {
                        id,
                        kind,
                        level,
                        topology,
                        meets_boundary,
                        segments,
                    });
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }
        Ok(BranchedComplex { fiber, sectors })
    }
}

fn parse_type(text: &str) -> Option<SurfaceType> {
    match text {
        "disk" => Some(SurfaceType {
            genus: 0,
            boundary_count: 1,
        }),
        "annulus" => Some(SurfaceType {
            genus: 0,
            boundary_count: 2,
        }),
        _ => {
            let rest = text.strip_prefix('g')?;
            let (g, b) = rest.split_once('b')?;
            let t = SurfaceType {
                genus: g.parse().ok()?,
                boundary_count: b.parse().ok()?,
            };
            // canonical spelling only, so the text form round-trips
            (t.to_string() == text).then_some(t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{uniformize, RawStep, StepOrigin};

    fn sequence(g: usize, k: usize, n: usize, sign: Sign) -> GoodSequence {
        let raw: Vec<RawStep> = (0..n)
            .map(|i| RawStep {
                sign,
                origin: StepOrigin::Twist {
                    syllable: i,
                    unit: 0,
                },
            })
            .collect();
        uniformize(SurfaceSpec::new(g, k).unwrap(), &raw)
    }

    #[test]
    fn be_complex_profile() {
        let c = build(&sequence(1, 2, 4, Sign::Negative)).unwrap();
        let vertical: Vec<_> = c.sectors_of(SectorKind::Vertical).collect();
        assert_eq!(vertical.len(), 8);
        for v in vertical {
            assert_eq!((v.cusp_count(Cusp::In), v.cusp_count(Cusp::Out)), (1, 1));
        }
        for h in c
            .sectors_of(SectorKind::Horizontal)
            .filter(|s| s.topology.is_disk())
        {
            assert!(h.cusp_count(Cusp::Out) >= 1, "{}", h.id);
        }
        assert!(find_sink_disks(&c).is_empty());
        assert_eq!(euler_audit(&c).unwrap().levels.len(), 4);
    }

    #[test]
    fn single_level() {
        let c = build(&sequence(1, 2, 1, Sign::Positive)).unwrap();
        assert_eq!(c.sectors_of(SectorKind::Vertical).count(), 2);
        assert!(find_sink_disks(&c).is_empty());
    }

    #[test]
    fn hand_built_findings() {
        let text = "\
sector id=D kind=other level=- type=disk dm=no cusps=in,in,in
sector id=H kind=other level=- type=disk dm=yes cusps=in,in
sector id=A kind=other level=- type=annulus dm=no cusps=in
sector id=E kind=other level=- type=disk dm=no cusps=in,out
";
        let c: BranchedComplex = text.parse().unwrap();
        assert_eq!(
            find_sink_disks(&c),
            vec![
                SinkFinding {
                    sector: "D".into(),
                    kind: SinkKind::SinkDisk
                },
                SinkFinding {
                    sector: "H".into(),
                    kind: SinkKind::HalfSinkDisk
                },
            ]
        );
        assert_eq!(euler_audit(&c), Err(AuditError::NoFiber));
    }

    #[test]
    fn audit_catches_missing_sector() {
        let mut c = build(&sequence(1, 2, 4, Sign::Negative)).unwrap();
        let victim = c
            .sectors
            .iter()
            .position(|s| s.kind == SectorKind::Horizontal && s.level == Some(2))
            .unwrap();
        c.sectors.remove(victim);
        assert!(matches!(
            euler_audit(&c),
            Err(AuditError::EulerMismatch { level: 2, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let c = build(&sequence(2, 3, 2, Sign::Positive)).unwrap();
        let text = c.to_string();
        let back: BranchedComplex = text.parse().unwrap();
        assert_eq!(back.to_string(), text);
        assert_eq!(find_sink_disks(&back), find_sink_disks(&c));
        euler_audit(&back).unwrap();
    }

    #[test]
    fn malformed_text() {
        for bad in [
            "sector id=X kind=vertical level=- type=disk dm=maybe cusps=in",
            "sector id=X kind=vertical level=- type=blob dm=no cusps=in",
            "sector id=X kind=vertical level=- type=disk dm=no cusps=sideways",
            "sector id=X kind=vertical",
            "wedge id=X",
            "sector id=X kind=vertical level=- type=g01b2 dm=no cusps=in",
        ] {
            assert!(bad.parse::<BranchedComplex>().is_err(), "{bad}");
        }
    }
}
