//! Command-line driver for `optapprox`.
//!
//! [`main_with`] parses arguments, runs one command and renders its report as
//! JSON, CSV or a plain text table. Failures are written to standard error as
//! `{"error": {"kind", "module", "message"}}` and mapped to exit codes:
//! `2` for invalid input, `3` for numerical breakdown, `4` when `verify` finds
//! a failing check.

pub mod commands;
pub mod encode;
pub mod output;
pub mod spec;
pub mod verify;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use output::{Format, Report, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "optapprox",
    version,
    about = "Optimal polynomial approximants to 1/f in Dirichlet-type spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal approximant p_n, its distance and its zeros.
    Approximant(DegreeArgs),
    /// Zeros of p_n over a range of degrees (CSV by default).
    Zeros(DegreeArgs),
    /// Orthogonal polynomials of the weighted space.
    Orthopoly {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long)]
        n: usize,
    },
    /// Reproducing kernel K_n(z, w) and the extremal problem at the origin.
    Kernel {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long)]
        n: usize,
        /// Point as `re,im`, a number, or JSON.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        w: String,
    },
    /// Table of p_n(0), partial sums and distances with a trend label.
    Cyclicity {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long = "max-n")]
        max_n: usize,
    },
    /// Levinson recursion and outer-function products (alpha = 0 only).
    Levinson {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long)]
        n: usize,
    },
    /// Zero of p_1, with a truncation study for infinite series.
    FirstZero {
        #[command(flatten)]
        f: FunctionArgs,
        /// Shortest prefix used by the truncation study.
        #[arg(long, default_value_t = 100_000)]
        start: usize,
    },
    /// Run the golden checks and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Function specification as JSON.
    #[arg(long = "f", value_name = "JSON")]
    pub f: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Float)]
    pub backend: BackendArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    #[command(flatten)]
    pub f: FunctionArgs,
    #[arg(long, conflicts_with = "n_range", required_unless_present = "n_range")]
    pub n: Option<usize>,
    /// Inclusive range of degrees `A..B`.
    #[arg(long = "n-range", value_name = "A..B")]
    pub n_range: Option<DegreeRange>,
}

impl DegreeArgs {
    pub fn range(&self) -> DegreeRange {
        match (self.n, self.n_range) {
            (Some(n), _) => DegreeRange { start: n, end: n },
            (None, Some(r)) => r,
            (None, None) => unreachable!("clap requires --n or --n-range"),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated subset of checks.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Nudge f(0) by 1/1000 in the golden computations, as a negative control.
    #[arg(long)]
    pub inject_perturbation: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for optapprox::Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => optapprox::Backend::Exact,
            BackendArg::Float => optapprox::Backend::Float,
        }
    }
}

/// Nonempty inclusive range of degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRange {
    pub start: usize,
    pub end: usize,
}

impl DegreeRange {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: usize) -> bool {
        self.start <= n && n <= self.end
    }
}

impl FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let start: usize = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
        let end: usize = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
        if start > end {
            return Err(format!("range {s:?} must be ascending"));
        }
        Ok(DegreeRange { start, end })
    }
}

/// Anything that stops a command.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Library(optapprox::Error),
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Library(e) => e.kind(),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    pub fn module(&self) -> &'static str {
        match self {
            CliError::Library(e) => e.module(),
            CliError::Usage(_) | CliError::Io(_) => "cli",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "module": self.module(), "message": self.to_string() } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<optapprox::Error> for CliError {
    fn from(e: optapprox::Error) -> Self {
        CliError::Library(e)
    }
}

fn report_error(e: &CliError) -> i32 {
    eprintln!("{}", e.to_json());
    e.exit_code()
}

/// Size the global rayon pool from `APPROX_THREADS`, if set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("APPROX_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("APPROX_THREADS must be a positive integer, got {value:?}")))?;
    // A second call in the same process (tests) finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Run the command and return its report, without writing anything.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    commands::run(&cli.command)
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Approximant(a) | Command::Zeros(a) => &a.f.out,
        Command::Orthopoly { f, .. }
        | Command::Kernel { f, .. }
        | Command::Cyclicity { f, .. }
        | Command::Levinson { f, .. }
        | Command::FirstZero { f, .. } => &f.out,
        Command::Verify(v) => &v.out,
    }
}

fn emit(report: &Report, out: &OutputArgs) -> Result<(), CliError> {
    let text = report.render(out.format)?;
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    EXIT_VALIDATION
                }
                _ => report_error(&CliError::Usage(e.to_string().trim_end().to_string())),
            };
        }
    };
    if let Err(e) = configure_threads() {
        return report_error(&e);
    }
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => return report_error(&e),
    };
    if let Err(e) = emit(&report, output_args(&cli.command)) {
        return report_error(&e);
    }
    if report.success {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(
            "0..50".parse::<DegreeRange>().unwrap(),
            DegreeRange { start: 0, end: 50 }
        );
        assert_eq!("3..=3".parse::<DegreeRange>().unwrap().len(), 1);
        assert!("5..2".parse::<DegreeRange>().is_err());
        assert!("5".parse::<DegreeRange>().is_err());
        assert!("a..2".parse::<DegreeRange>().is_err());
    }

    #[test]
    fn negative_alpha_parses() {
        let cli = Cli::try_parse_from(["optapprox", "approximant", "--f", "{}", "--alpha", "-2", "--n", "1"]).unwrap();
        let Command::Approximant(a) = cli.command else { panic!() };
        assert_eq!(a.f.alpha, -2.0);
        assert_eq!(a.range(), DegreeRange { start: 1, end: 1 });
    }

    #[test]
    fn n_and_range_conflict() {
        assert!(Cli::try_parse_from(["optapprox", "zeros", "--f", "{}", "--n", "1", "--n-range", "0..2"]).is_err());
        assert!(Cli::try_parse_from(["optapprox", "zeros", "--f", "{}"]).is_err());
    }

    #[test]
    fn error_json_carries_module() {
        let e = CliError::from(optapprox::Error::Breakdown { step: 3, modulus: 1.0 });
        assert_eq!(e.exit_code(), EXIT_NUMERICAL);
        assert_eq!(e.to_json()["error"]["module"], "levinson");
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_VALIDATION);
    }
}
