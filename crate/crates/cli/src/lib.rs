//! Command line front end: reads a problem file, solves every problem and
//! prints one single-line JSON record per problem.

pub mod input;
pub mod report;

use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::Parser;
use genconj::Budget;

pub use input::{parse, ParseError, ProblemFile};
pub use report::{render, run, Record, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Parse(Vec<ParseError>),
}

#[derive(Parser, Debug, Clone)]
#[command(name = "genconj", version, about = "Decide generalized conjugacy, twisted conjugacy and orbit problems")]
pub struct Args {
    /// Problem file; standard input when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Print only the JSON records.
    #[arg(long)]
    pub json: bool,
    /// Re-verify every yes certificate and report the result.
    #[arg(long)]
    pub certify: bool,
    #[arg(long, value_name = "N")]
    pub max_exponent: Option<u64>,
    #[arg(long, value_name = "N")]
    pub ball_radius: Option<usize>,
    #[arg(long, value_name = "N")]
    pub max_quotient_size: Option<u64>,
    #[arg(long, value_name = "N")]
    pub max_steps: Option<u64>,
    /// Also try small finite groups when congruence quotients do not separate.
    #[arg(long)]
    pub generic_quotient_fallback: bool,
}

impl Args {
    pub fn options(&self) -> RunOptions {
        let mut budget = Budget::default();
        if let Some(v) = self.max_exponent {
            budget.max_exponent = v;
        }
        if let Some(v) = self.ball_radius {
            budget.max_radius = v;
        }
        if let Some(v) = self.max_quotient_size {
            budget.max_quotient_size = v;
        }
        if let Some(v) = self.max_steps {
            budget.max_steps = v;
        }
        budget.generic_quotients |= self.generic_quotient_fallback;
        RunOptions {
            budget,
            certify: self.certify,
        }
    }
}

fn read_input(args: &Args) -> Result<String, CliError> {
    match &args.input {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(|source| CliError::Io {
                path: "standard input".into(),
                source,
            })?;
            Ok(text)
        }
    }
}

/// Parses, solves and renders; the report text on success.
pub fn execute(args: &Args) -> Result<String, CliError> {
    let text = read_input(args)?;
    let file = parse(&text).map_err(CliError::Parse)?;
    Ok(render(&run(&file, &args.options()), args.json))
}

/// Process entry point returning the exit code: 0 unless the input could
/// not be read or parsed.
pub fn main_with(args: &Args, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match execute(args) {
        Ok(report) => {
            let _ = out.write_all(report.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
