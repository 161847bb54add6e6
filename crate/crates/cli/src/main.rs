//! `ksumlab`: command-line access to every stage of the k-sum pipeline.
//!
//! Exit codes: 0 success / affirmative, 1 checked and negative, 2 usage or
//! input error.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ksumlab", version, about = "Exact tools for the k-sum reconstruction problem")]
struct Cli {
    /// Output format; `search` defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the multiset of k-sums of a set.
    Ksums {
        /// Set literal such as "-1 0^10 1", or a file with one set per line.
        #[arg(allow_hyphen_values = true)]
        set: String,
        #[arg(short, long)]
        k: usize,
    },
    /// Compare the k-sum multisets of two sets.
    Collide {
        /// First set literal, or a file holding both sets.
        #[arg(allow_hyphen_values = true)]
        a: String,
        /// Second set literal or file.
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(short, long)]
        k: usize,
    },
    /// Expand E_p (the p-th power sum of the k-sums) in power sums S_i.
    Expand(ExpandArgs),
    /// Elimination stage for (n, k) = (12, 4).
    Eliminate(EliminateArgs),
    /// Bounded exhaustive search for colliding multisets.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Index p of E_p.
    #[arg(required_unless_present = "all")]
    p: Option<u32>,
    #[arg(short, long)]
    k: Option<u32>,
    #[arg(short, long)]
    n: Option<u32>,
    /// Substitute S1 = 0.
    #[arg(long)]
    s1zero: bool,
    /// Leave S_m with m > n unreduced.
    #[arg(long)]
    unreduced: bool,
    /// Compare against the reference identities for (12, 4), S1 = 0.
    #[arg(long, conflicts_with = "all")]
    check_paper: bool,
    /// Print E_1..E_pmax in fixture format.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 26, requires = "all")]
    pmax: u32,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct EliminateArgs {
    /// Check the generated quadratic's c2 and c1 coefficients.
    #[arg(long)]
    verify_coefficients: bool,
    /// Roots of the quadratic for A = {-1, 0^10, 1}.
    #[arg(long)]
    example1: bool,
    /// The second root S6'' for a 12-element set.
    #[arg(long, allow_hyphen_values = true, value_name = "SET")]
    second_root: Option<String>,
    /// The residual relations for a 12-element set.
    #[arg(long, allow_hyphen_values = true, value_name = "SET")]
    residuals: Option<String>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    n: usize,
    k: usize,
    #[arg(short, long)]
    bound: u32,
    /// Only negation-symmetric sets {±x_1, ..., ±x_(n/2)}.
    #[arg(long)]
    symmetric: bool,
    /// Report every pair instead of one per shift/scale/reflection class.
    #[arg(long)]
    no_dedupe: bool,
    /// Worker threads (0 = all cores).
    #[arg(short, long, default_value_t = 0)]
    workers: usize,
    /// Checkpoint file; completed chunks are appended and skipped on rerun.
    #[arg(long, value_name = "FILE")]
    resume: Option<PathBuf>,
    /// Write records here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Ksums { set, k } => commands::ksums(&set, k, cli.format.unwrap_or(Format::Text)),
        Command::Collide { a, b, k } => commands::collide(&std::iter::once(a).chain(b).collect::<Vec<_>>(), k, cli.format.unwrap_or(Format::Text)),
        Command::Expand(args) => commands::expand(&args, cli.format.unwrap_or(Format::Text)),
        Command::Eliminate(args) => commands::eliminate(&args, cli.format.unwrap_or(Format::Text)),
        Command::Search(args) => commands::search(&args, cli.format.unwrap_or(Format::Json)),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        // `ksumlab search ... | head` is not an error.
        Err(ksumlab::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
