use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use taut_multislope::cli::{
    analyze, baldwin_etnyre, check, parse_multislope, parse_offsets, realize, render_be,
    render_realize, AnalyzeInput, CommandError, RealizeInput, EXIT_FINDINGS, EXIT_INPUT, EXIT_OK,
};

/// Taut foliations with prescribed boundary multislopes on fibered 3-manifolds.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and certify the branched surface of a monodromy word.
    Analyze {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        boundary: usize,
        /// Monodromy as a twist word, e.g. "a b^-1 c d^-1".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        word: String,
        /// File of `name = word` lines.
        #[arg(long)]
        macros: Option<PathBuf>,
        /// Comma separated slopes to test, one per boundary component.
        #[arg(long, allow_hyphen_values = true)]
        multislope: Option<String>,
        /// Integer meridian offsets, one per boundary component.
        #[arg(long, allow_hyphen_values = true)]
        offsets: Option<String>,
        /// Write the branched surface in the text format read by `check`.
        #[arg(long)]
        complex_out: Option<PathBuf>,
    },
    /// Test a multislope against the interval of an n-level construction.
    Realize {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        multislope: String,
        #[arg(long, allow_hyphen_values = true)]
        offsets: Option<String>,
        /// Expected number of boundary components.
        #[arg(long)]
        boundary: Option<usize>,
    },
    /// Look for sink disks and half sink disks in a branched surface file.
    Check { file: PathBuf },
    /// Reproduce the pseudo-Anosov example on the torus with two holes.
    BaldwinEtnyre {
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k1: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k2: i64,
    },
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let out = |text: String, code: i32| {
        print!("{text}");
        Ok(code)
    };
    match cli.command {
        Command::Analyze {
            genus,
            boundary,
            word,
            macros,
            multislope,
            offsets,
            complex_out,
        } => {
            let input = AnalyzeInput {
                genus,
                boundary,
                word,
                macros: macros.as_ref().map(read).transpose()?,
                multislope: multislope.as_deref().map(parse_multislope).transpose()?,
                offsets: offsets.as_deref().map(parse_offsets).transpose()?,
            };
            let (report, complex) = analyze(&input)?;
            if let Some(path) = complex_out {
                fs::write(&path, complex.to_string())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            out(report.render(), report.exit_code())
        }
        Command::Realize {
            n,
            multislope,
            offsets,
            boundary,
        } => {
            let input = RealizeInput {
                n,
                multislope: parse_multislope(&multislope)?,
                offsets: offsets.as_deref().map(parse_offsets).transpose()?,
                boundary,
            };
            let verdict = realize(&input)?;
            let code = if verdict.is_realizable() {
                EXIT_OK
            } else {
                EXIT_FINDINGS
            };
            out(render_realize(&input, &verdict), code)
        }
        Command::Check { file } => {
            let report = check(&read(&file)?)?;
            out(report.render(), report.exit_code())
        }
        Command::BaldwinEtnyre { n, k1, k2 } => {
            out(render_be(&baldwin_etnyre(n, k1, k2)?), EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<CommandError>()
                .map_or(EXIT_INPUT, CommandError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
