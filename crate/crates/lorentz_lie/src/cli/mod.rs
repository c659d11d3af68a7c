//! Batch front end: `analyze`, `verify` and `classify` over JSON model files.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse failure,
//! 3 verification failure.

pub mod analyze;
pub mod model;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use analyze::{analyze, AnalyzeOptions, Mode, Report};
pub use model::{parse_model, resolve, ModelFile};
pub use verify::{run_suite, CriterionResult, Suite};

use crate::algebra_zoo::{classify_decomposition, Classification};
use model::Object;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lorentz-lie", version, about = "Lie algebras with ad-invariant Lorentz forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze every entry of a model file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Also write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the built-in verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Classify the single algebra defined in a model file.
    Classify { file: PathBuf },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum ModeArg {
    Exact,
    Numeric,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load(text: &str) -> Result<model::Resolved, CliError> {
    resolve(&parse_model(text)?)
}

pub fn cmd_analyze(text: &str, opts: &AnalyzeOptions) -> Result<Report, CliError> {
    Ok(analyze(&load(text)?, opts))
}

pub fn cmd_classify(text: &str) -> Result<String, CliError> {
    let r = load(text)?;
    let algs: Vec<_> = r
        .objects
        .iter()
        .filter_map(|(id, (_, o))| match o {
            Object::Algebra(a) => Some((id, a)),
            _ => None,
        })
        .collect();
    let [(id, a)] = algs.as_slice() else {
        return Err(CliError::Validation(format!("expected exactly one algebra, found {}", algs.len())));
    };
    let c = classify_decomposition(a);
    let mut out = format!("{id}: {}\n", analyze::classification_line(&c));
    if let Classification::Classified(res) = &c {
        let (basis, mode) = match &res.witness {
            crate::algebra_zoo::Certificate::Exact(m) => (
                (0..m.rows()).map(|i| m.row(i).iter().map(crate::lie_core::linalg::fmt_q).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>(),
                "exact",
            ),
            crate::algebra_zoo::Certificate::Numeric { basis, .. } => (
                (0..basis.nrows()).map(|i| (0..basis.ncols()).map(|j| format!("{:.12}", basis[(i, j)])).collect::<Vec<_>>().join(" ")).collect(),
                "numeric",
            ),
        };
        out.push_str(&format!("certificate basis ({mode}, columns in input coordinates):\n"));
        for row in basis {
            out.push_str(&format!("  {row}\n"));
        }
    }
    Ok(out)
}

pub fn cmd_verify(suite: Suite) -> (String, bool) {
    let results = run_suite(suite);
    let mut out = String::new();
    for r in &results {
        out.push_str(&r.line());
        out.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
    (out, passed == results.len())
}

/// Runs a parsed command line, returning stdout text or an error.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Analyze { file, mode, tol, json } => {
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Numeric => Mode::Numeric,
            };
            let report = cmd_analyze(&read(&file)?, &AnalyzeOptions { mode, tolerance: tol })?;
            if let Some(path) = json {
                std::fs::write(&path, report.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(report.to_markdown())
        }
        Command::Verify { suite } => {
            let (text, ok) = cmd_verify(suite);
            if ok {
                Ok(text)
            } else {
                print!("{text}");
                Err(CliError::Verification("some criteria failed".into()))
            }
        }
        Command::Classify { file } => cmd_classify(&read(&file)?),
    }
}
