//! Command-line front end: tensor generation, condition checks, the
//! constant-curvature certification and the identity certificates.
//!
//! Exit codes: `0` everything passed, `1` a mathematical check failed,
//! `2` usage, parse or unsupported-input errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use twostein_core::conditions::BlockSplit;
use twostein_core::io::{parse_tensor, sha256_hex, AnyTensor};
use twostein_core::Error as CoreError;

mod certify;
mod check;
mod generate;
mod identities;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "twostein", version, about = "Curvature tensors, 2-stein checks and the constant-curvature certificate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a zoo tensor as JSON.
    Generate(generate::GenerateArgs),
    /// Run condition checks on a tensor file and emit JSON lines.
    Check(check::CheckArgs),
    /// Shift a tensor, verify the hypotheses and run the deduction.
    Certify(certify::CertifyArgs),
    /// Certify the algebraic identities on seeded block tensors.
    Identities(identities::IdentitiesArgs),
}

/// `--split d1 d2`.
#[derive(Debug, Clone, Args)]
pub struct SplitArg {
    /// Block dimensions of W1 and W2.
    #[arg(long, num_args = 2, value_names = ["D1", "D2"])]
    pub split: Option<Vec<usize>>,
}

impl SplitArg {
    pub fn get(&self) -> Result<Option<BlockSplit>, CliError> {
        match self.split.as_deref() {
            None => Ok(None),
            Some([d1, d2]) => Ok(Some(BlockSplit::new(*d1, *d2)?)),
            Some(_) => Err(CliError::Usage("--split takes two dimensions".into())),
        }
    }

    pub fn require(&self) -> Result<BlockSplit, CliError> {
        self.get()?.ok_or_else(|| CliError::Usage("--split d1 d2 is required".into()))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::HypothesisFailed { .. } | CoreError::IdentityViolation(_)) => 1,
            _ => 2,
        }
    }
}

/// Whether the command's checks passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }

    fn from_bool(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Check(args) => check::run(args),
        Command::Certify(args) => certify::run(args),
        Command::Identities(args) => identities::run(args),
    }
}

/// Parses arguments and runs, mapping everything to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// The parsed tensor and the SHA-256 of the file bytes.
pub(crate) fn load_tensor(path: &Path) -> Result<(AnyTensor, String), CliError> {
    let text = read_file(path)?;
    let tensor = parse_tensor(&text)?;
    Ok((tensor, sha256_hex(text.as_bytes())))
}

/// Writes to `out`, or to standard output when absent.
pub(crate) fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Fields every report carries.
pub(crate) fn report_header(command: &str, config: Value, input_hash: Option<&str>) -> Value {
    json!({
        "tool": "twostein",
        "version": VERSION,
        "command": command,
        "config": config,
        "input_hash": input_hash,
    })
}

pub(crate) fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}
