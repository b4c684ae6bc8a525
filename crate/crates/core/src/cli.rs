//! Command implementations behind the binary. Every command yields a
//! line-oriented `key: value` report with a fixed field order and an exit
//! code, so the binary only has to parse arguments and print.

use std::fmt::Write as _;

use thiserror::Error;

use crate::be_example::{run_be, BeError, BeInstance, BeReport};
use crate::branched::{
    build, euler_audit, find_sink_disks, AuditError, AuditReport, BranchedComplex, BranchedError,
    SinkFinding, SinkKind, CERTIFIED_CONDITIONS, INHERITED_CONDITIONS,
};
use crate::sequence::{synthesize, GoodSequence, SequenceError};
use crate::slope::{
    multislope_query_in, realizable_interval, Basis, ComponentVerdict, MultislopeVerdict, Slope,
    SlopeError, SlopeInterval,
};
use crate::surface::{SurfaceError, SurfaceSpec};
use crate::words::{expand_macros, parse_word, GervaisAlphabet, MacroTable, WordError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_AUDIT: i32 = 3;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("{context}: {source}")]
    Word {
        context: &'static str,
        #[source]
        source: WordError,
    },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Branched(#[from] BranchedError),
    #[error("internal audit failed: {0}")]
    Audit(#[from] AuditError),
    #[error(transparent)]
    Be(#[from] BeError),
    #[error("expected {expected} {what}, found {found}")]
    Arity {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("cannot parse offset `{0}` as an integer")]
    Offset(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Audit(_) | CommandError::Be(BeError::Audit(_)) => EXIT_AUDIT,
            _ => EXIT_INPUT,
        }
    }
}

/// Parses a comma separated list of slopes such as `-1/8,1/3,inf`.
pub fn parse_multislope(text: &str) -> Result<Vec<Slope>, CommandError> {
    Ok(text
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<Slope>, SlopeError>>()?)
}

pub fn parse_offsets(text: &str) -> Result<Vec<i64>, CommandError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CommandError::Offset(t.to_string()))
        })
        .collect()
}

fn bases(offsets: Option<&[i64]>, count: usize) -> Result<Vec<Basis>, CommandError> {
    match offsets {
        None => Ok(vec![Basis::Adapted; count]),
        Some(c) if c.len() != count => Err(CommandError::Arity {
            what: "offsets",
            expected: count,
            found: c.len(),
        }),
        Some(c) => Ok(c.iter().map(|&c| Basis::Offset(c)).collect()),
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeInput {
    pub genus: usize,
    pub boundary: usize,
    pub word: String,
    pub macros: Option<String>,
    pub multislope: Option<Vec<Slope>>,
    pub offsets: Option<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub spec: SurfaceSpec,
    pub word: String,
    pub monodromy: String,
    pub sequence_word: String,
    pub sequence: GoodSequence,
    pub sink_disks: Vec<SinkFinding>,
    pub audit: AuditReport,
    pub interval: SlopeInterval,
    pub multislope: Option<MultislopeVerdict>,
}

impl AnalysisReport {
    pub fn exit_code(&self) -> i32 {
        if self.sink_disks.is_empty() {
            EXIT_OK
        } else {
            EXIT_FINDINGS
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        field(&mut out, "genus", self.spec.genus());
        field(&mut out, "boundary", self.spec.boundary_count());
        field(&mut out, "word", display_word(&self.word));
        field(&mut out, "monodromy", &self.monodromy);
        field(&mut out, "sequence_word", &self.sequence_word);
        render_sequence(&mut out, &self.sequence);
        render_certificate(&mut out, &self.sink_disks, &self.audit);
        render_intervals(&mut out, &self.interval, self.spec.boundary_count());
        if let Some(v) = &self.multislope {
            render_verdict(&mut out, "multislope", v);
        }
        out
    }
}

/// Runs the whole pipeline. The sequence is synthesized for the inverse of
/// the monodromy, from the standard tuple to its preimage.
pub fn analyze(input: &AnalyzeInput) -> Result<(AnalysisReport, BranchedComplex), CommandError> {
    let spec = SurfaceSpec::new(input.genus, input.boundary)?;
    let alphabet = GervaisAlphabet::new(spec);
    let macros = match &input.macros {
        Some(text) => MacroTable::parse(text, &alphabet).map_err(|source| CommandError::Word {
            context: "macro file",
            source,
        })?,
        None => MacroTable::new(),
    };
    let word =
        parse_word(&input.word, &alphabet, &macros).map_err(|source| CommandError::Word {
            context: "word",
            source,
        })?;
    let expand = |w| {
        expand_macros(w, &macros).map_err(|source| CommandError::Word {
            context: "word",
            source,
        })
    };
    let monodromy = expand(&word)?;
    let inverse = monodromy.drop_boundary_twists().invert();
    let sequence = synthesize(&inverse, spec)?;
    let complex = build(&sequence)?;
    let sink_disks = find_sink_disks(&complex);
    let audit = euler_audit(&complex)?;
    let levels = sequence.len() as u64;
    let interval = realizable_interval(levels)?;
    let multislope = match &input.multislope {
        None => None,
        Some(slopes) => {
            if slopes.len() != spec.boundary_count() {
                return Err(CommandError::Arity {
                    what: "slopes",
                    expected: spec.boundary_count(),
                    found: slopes.len(),
                });
            }
            let b = bases(input.offsets.as_deref(), slopes.len())?;
            Some(multislope_query_in(levels, slopes, &b)?)
        }
    };
    let names = macros.aliases();
    let report = AnalysisReport {
        spec,
        word: input.word.trim().to_string(),
        monodromy: display_word(&monodromy.display_with(&names).to_string()),
        sequence_word: display_word(&inverse.display_with(&names).to_string()),
        sequence,
        sink_disks,
        audit,
        interval,
        multislope,
    };
    Ok((report, complex))
}

#[derive(Debug, Clone)]
pub struct RealizeInput {
    pub n: u64,
    pub multislope: Vec<Slope>,
    pub offsets: Option<Vec<i64>>,
    pub boundary: Option<usize>,
}

pub fn realize(input: &RealizeInput) -> Result<MultislopeVerdict, CommandError> {
    if let Some(k) = input.boundary {
        if k != input.multislope.len() {
            return Err(CommandError::Arity {
                what: "slopes",
                expected: k,
                found: input.multislope.len(),
            });
        }
    }
    let b = bases(input.offsets.as_deref(), input.multislope.len())?;
    Ok(multislope_query_in(input.n, &input.multislope, &b)?)
}

pub fn render_realize(input: &RealizeInput, verdict: &MultislopeVerdict) -> String {
    let mut out = String::new();
    field(&mut out, "levels", input.n);
    field(&mut out, "interval", &verdict.interval);
    let given: Vec<String> = input.multislope.iter().map(Slope::to_string).collect();
    field(&mut out, "input", given.join(","));
    if let Some(c) = &input.offsets {
        let c: Vec<String> = c.iter().map(i64::to_string).collect();
        field(&mut out, "offsets", c.join(","));
    }
    render_verdict(&mut out, "multislope", verdict);
    out
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub sectors: usize,
    pub findings: Vec<SinkFinding>,
    pub audit: Option<Result<AuditReport, AuditError>>,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.findings.is_empty() {
            EXIT_OK
        } else {
            EXIT_FINDINGS
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        field(&mut out, "sectors", self.sectors);
        let count = |kind| self.findings.iter().filter(|f| f.kind == kind).count();
        field(&mut out, "sink_disks", count(SinkKind::SinkDisk));
        field(&mut out, "half_sink_disks", count(SinkKind::HalfSinkDisk));
        for f in &self.findings {
            field(&mut out, "finding", format_args!("{} {}", f.kind, f.sector));
        }
        let audit = match &self.audit {
            None => "skipped (no level structure)".to_string(),
            Some(Ok(r)) => format!("ok ({} levels)", r.levels.len()),
            Some(Err(e)) => format!("failed: {e}"),
        };
        field(&mut out, "euler_audit", audit);
        out
    }
}

pub fn check(text: &str) -> Result<CheckReport, CommandError> {
    let complex: BranchedComplex = text.parse()?;
    Ok(CheckReport {
        sectors: complex.sectors.len(),
        findings: find_sink_disks(&complex),
        audit: complex.fiber.map(|_| euler_audit(&complex)),
    })
}

pub fn baldwin_etnyre(n: u64, k1: i64, k2: i64) -> Result<BeReport, CommandError> {
    Ok(run_be(BeInstance::new(n, k1, k2)?)?)
}

pub fn render_be(r: &BeReport) -> String {
    let names = r.aliases();
    let mut out = String::new();
    field(&mut out, "preset", "baldwin-etnyre");
    field(
        &mut out,
        "instance",
        format_args!(
            "n={} k1={} k2={}",
            r.instance.n, r.instance.k1, r.instance.k2
        ),
    );
    field(&mut out, "genus", r.spec.genus());
    field(&mut out, "boundary", r.spec.boundary_count());
    for name in ["a", "b", "c"] {
        let body = r.macros.get(name).expect("preset macro");
        field(&mut out, &format!("macro.{name}"), body);
    }
    field(&mut out, "macro.d", &r.d_macro);
    field(&mut out, "monodromy", "a b^-1 c d^-1");
    field(
        &mut out,
        "inverse_expansion",
        display_word(&r.inverse_expansion.display_with(&names).to_string()),
    );
    render_sequence(&mut out, &r.sequence);
    render_certificate(&mut out, &r.sink_disks, &r.audit);
    render_intervals(&mut out, &r.interval, r.spec.boundary_count());
    render_verdict(&mut out, "meridional", &r.meridional);
    out
}

fn display_word(text: &str) -> String {
    if text.is_empty() {
        "1".to_string()
    } else {
        text.to_string()
    }
}

fn field(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}: {value}");
}

fn render_sequence(out: &mut String, seq: &GoodSequence) {
    field(out, "levels", seq.len());
    field(out, "sign", seq.sign);
    field(out, "kept_steps", seq.kept);
    field(out, "substitutions", seq.substituted);
}

fn render_certificate(out: &mut String, findings: &[SinkFinding], audit: &AuditReport) {
    if findings.is_empty() {
        field(out, "sink_disks", "none");
    } else {
        let list: Vec<String> = findings
            .iter()
            .map(|f| format!("{} {}", f.kind, f.sector))
            .collect();
        field(out, "sink_disks", list.join(", "));
    }
    field(out, "certified", CERTIFIED_CONDITIONS.join(", "));
    field(out, "inherited", INHERITED_CONDITIONS.join(", "));
    field(
        out,
        "euler_audit",
        format_args!("ok ({} levels)", audit.levels.len()),
    );
}

fn render_intervals(out: &mut String, interval: &SlopeInterval, k: usize) {
    for j in 1..=k {
        field(out, &format!("interval.{j}"), interval);
    }
}

fn render_verdict(out: &mut String, key: &str, v: &MultislopeVerdict) {
    let slopes: Vec<String> = v.slopes.iter().map(Slope::to_string).collect();
    field(out, key, format_args!("({})", slopes.join(", ")));
    for (j, c) in v.components.iter().enumerate() {
        let line = match c {
            ComponentVerdict::Realized { x, y } => format!("realized x={x} y={y}"),
            ComponentVerdict::Rejected => {
                format!("rejected, {} is not in {}", v.slopes[j], v.interval)
            }
        };
        field(out, &format!("{key}.{}", j + 1), line);
    }
    if v.is_realizable() {
        field(out, &format!("{key}_verdict"), "realizable");
    } else {
        let bad: Vec<String> = v.rejected().iter().map(usize::to_string).collect();
        field(
            out,
            &format!("{key}_verdict"),
            format_args!("rejected (components {})", bad.join(",")),
        );
    }
}
