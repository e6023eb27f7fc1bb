//! Command-line front end for `schurlab`.
//!
//! Exit codes: 0 success, 1 the property under test is false, 2 malformed
//! input or arguments, 3 an underdetermined completion.

pub mod commands;
pub mod document;
pub mod generator;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use schurlab::{SchurError, Tolerance};

pub use commands::Outcome;
pub use document::MatrixDocument;
pub use verify::{run_suite, Suite, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDERDETERMINED: i32 = 3;

/// Environment variable holding a relative tolerance used when `--tol` is absent.
pub const TOL_ENV: &str = "SCHURLAB_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] SchurError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Library(e) => match e {
                SchurError::NotMultiplicative { .. } | SchurError::ZeroEntry { .. } | SchurError::Precondition(_) => {
                    EXIT_FALSE
                }
                _ => EXIT_INPUT,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "schurlab",
    version,
    about = "Multiplicative Schur maps: certify, factor, enumerate, complete"
)]
pub struct Cli {
    /// Relative tolerance (default 1e-10, or $SCHURLAB_TOL).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify that S_A is multiplicative (and, with --star, *-preserving).
    Check {
        /// Matrix document (JSON, or CSV by extension; `-` for stdin).
        path: PathBuf,
        #[arg(long)]
        star: bool,
        #[arg(long)]
        json: bool,
    },
    /// Factor a multiplicative A as a_ij = f(i)/f(j).
    Factor {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Complete a partial matrix (null entries) to a multiplicative one.
    Complete {
        path: PathBuf,
        /// Require unimodular entries and a Hermitian completion.
        #[arg(long)]
        star: bool,
    },
    /// List the 2^(n-1) real *-preserving multiplicative n x n matrices.
    Enumerate {
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Lines)]
        format: Format,
    },
    /// Operator norm of A and, when multiplicative, the norm of S_A.
    Norm {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Unit vector on which the n x n corner of a generator has norm n.
    Witness {
        /// toeplitz:<re>,<im> | scaling:<file> | table:<file>
        #[arg(long = "gen")]
        generator: String,
        n: usize,
        /// Emit `n,lower_bound` CSV rows for n = 2, 4, ... up to n instead.
        #[arg(long)]
        series: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded property suite and print a JSON report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One canonical JSON document per line.
    Lines,
    /// A single JSON array of documents.
    Array,
}

/// Resolves the tolerance from `--tol`, then `$SCHURLAB_TOL`, then the default.
pub fn resolve_tolerance(flag: Option<f64>, env: Option<String>) -> Result<Tolerance, CliError> {
    let rel = match (flag, env) {
        (Some(rel), _) => rel,
        (None, Some(text)) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{TOL_ENV}={text:?} is not a number")))?,
        (None, None) => return Ok(Tolerance::default()),
    };
    Ok(Tolerance::relative(rel)?)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = resolve_tolerance(cli.tol, std::env::var(TOL_ENV).ok())
        .and_then(|tol| commands::execute(&cli.command, tol, out, err));
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_resolution() {
        assert_eq!(resolve_tolerance(None, None).unwrap(), Tolerance::default());
        assert_eq!(resolve_tolerance(Some(1e-6), Some("1e-3".into())).unwrap().rel(), 1e-6);
        assert_eq!(resolve_tolerance(None, Some(" 1e-3 ".into())).unwrap().rel(), 1e-3);
        assert!(resolve_tolerance(None, Some("tight".into())).is_err());
        assert!(resolve_tolerance(Some(-1.0), None).is_err());
    }

    #[test]
    fn argument_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["schurlab", "verify", "--suite", "bogus"], &mut out, &mut err),
            EXIT_INPUT
        );
        assert_eq!(run(["schurlab", "frobnicate"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(run(["schurlab", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
