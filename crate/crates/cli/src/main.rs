//! `hstair`: command-line access to capacity tables, embedding bounds,
//! exceptional classes, Cremona reduction and staircase families.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for mathematical
//! domain errors or failed verifications.

mod capfile;
mod commands;
mod curves;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use hstair::exactnum::parse_rational;
use hstair::{Branch, Rational};

#[derive(Parser)]
#[command(
    name = "hstair",
    version,
    about = "Ellipsoid embeddings into Hirzebruch surfaces, computed exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Write the ECH capacities c_0..c_K of scale * X_b as JSON.
    Caps {
        #[arg(long, value_parser = rational)]
        b: Rational,
        #[arg(long, value_parser = rational, default_value = "1")]
        scale: Rational,
        /// Largest index K.
        #[arg(long)]
        count: usize,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the capacity lower bound for the embedding function.
    EmbedLower {
        #[arg(long)]
        caps: PathBuf,
        #[arg(long, value_parser = rational)]
        zmin: Rational,
        #[arg(long, value_parser = rational)]
        zmax: Rational,
        #[arg(long, value_parser = rational)]
        step: Rational,
        #[arg(long)]
        out: PathBuf,
        /// Add the volume curve sqrt(z / (1 - b^2)).
        #[arg(long)]
        with_volume: bool,
        /// Add the curve of accumulation points on the branch of b.
        #[arg(long)]
        with_acc_curve: bool,
    },
    /// Sample one class obstruction, or one capacity ratio.
    #[command(group(ArgGroup::new("source").required(true).args(["class", "k"])))]
    Obstruction {
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, value_parser = rational)]
        b: Rational,
        #[arg(long, value_parser = rational)]
        zmin: Rational,
        #[arg(long, value_parser = rational)]
        zmax: Rational,
        #[arg(long, value_parser = rational)]
        step: Rational,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether a class is exceptional by Cremona reduction.
    Reduce {
        #[arg(long)]
        class: String,
        /// Print every intermediate state.
        #[arg(long)]
        log: bool,
    },
    /// Search for quasi-perfect classes.
    #[command(group(ArgGroup::new("search").required(true).args(["k", "cf", "range"])))]
    FindClasses {
        /// ECH index k = (d(d+3) - m(m+1))/2.
        #[arg(long)]
        k: Option<u64>,
        /// Finite continued fraction of the center, e.g. "[6;1,4]".
        #[arg(long)]
        cf: Option<String>,
        /// Open interval of centers.
        #[arg(long, num_args = 2, value_names = ["Z1", "Z2"], value_parser = rational, requires_all = ["qmin", "qmax"])]
        range: Option<Vec<Rational>>,
        #[arg(long)]
        qmin: Option<u64>,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// Generate a pre-staircase family.
    Staircase {
        /// Family spec such as U:u:0:short.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        kmax: usize,
        /// Run the Diophantine, recursion, limit-inequality and Cremona checks.
        #[arg(long)]
        verify: bool,
    },
    /// Blocked intervals of a center-blocking class.
    #[command(group(ArgGroup::new("which").required(true).args(["class", "family"])))]
    Blocking {
        #[arg(long)]
        class: Option<String>,
        #[arg(long, requires = "n")]
        family: Option<String>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Accumulation point acc(b).
    Acc {
        #[arg(long, value_parser = rational)]
        b: Rational,
    },
    /// Inverse of acc on one branch.
    AccInv {
        #[arg(long, value_parser = rational)]
        z: Rational,
        #[arg(long, value_parser = parse_branch)]
        branch: Branch,
    },
    /// Smallest capacity index obstructing a staircase at b.
    MinObstructingK {
        #[arg(long, value_parser = rational)]
        b: Rational,
        #[arg(long)]
        caps: PathBuf,
    },
    /// Check the counting claims for b = 1/5 up to tmax.
    VerifyB15 {
        #[arg(long)]
        tmax: u64,
        /// Sample points z just above 6.
        #[arg(long, value_delimiter = ',', value_parser = rational, default_value = "601/100,121/20,6049/1000")]
        z: Vec<Rational>,
    },
    /// Plot CSV curves as SVG.
    Plot {
        /// Comma-separated CSV files.
        #[arg(long = "in", value_delimiter = ',', required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "color")]
        style: svg::Style,
    },
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse().map_err(|e: hstair::Error| e.to_string())
}

/// Bad input that is not a mathematical failure.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A verification that ran and found a failure.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if cause.is::<CheckFailed>() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<hstair::Error>() {
            return match err {
                hstair::Error::Parse(_) | hstair::Error::InvalidArgument(_) => 1,
                _ => 2,
            };
        }
    }
    1
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("STAIRCASE_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            UsageError(format!(
                "STAIRCASE_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        if n == 0 {
            return Err(UsageError("STAIRCASE_THREADS must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match configure_threads().and_then(|_| commands::run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
