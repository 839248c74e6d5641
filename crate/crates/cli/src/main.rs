//! `ipr`: classify, build and search image partition regular matrices.
//!
//! JSON goes to standard output, human-readable summaries to standard error.
//! Exit codes: 0 success or forced at scale, 1 recheck rejected, 2 escaping
//! coloring or no witness, 3 budget exhausted, 64 usage error, 65 malformed
//! input, 74 output file not writable.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ipr_core::coloring::DEFAULT_BUDGET;
use ipr_core::Rational;

use crate::input::EXIT_USAGE;

#[derive(Parser, Debug)]
#[command(name = "ipr", version, about = "Image partition regular matrix tooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report structural classes of a matrix with certificates.
    Classify {
        matrix: PathBuf,
        /// Largest d tried for the restricted triangular test.
        #[arg(long, default_value_t = 4)]
        dmax: u64,
    },
    /// Construct a matrix and print it as JSON.
    Build {
        #[command(subcommand)]
        family: Build,
    },
    /// Search every canonical coloring of [1..N] for a witness.
    Verify(SearchArgs),
    /// Print the first coloring with no witness, as a coloring file.
    Badcoloring(SearchArgs),
    /// First witness for one coloring, in lexicographic order of x.
    Witness {
        matrix: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        xmax: u64,
        /// Distinct rows must take distinct values.
        #[arg(long)]
        strong: bool,
    },
    /// Bounded J-set membership search.
    Jset {
        /// JSON array of positive integers.
        #[arg(long)]
        set: PathBuf,
        /// JSON array of integer sequences of equal length T.
        #[arg(long)]
        seqs: PathBuf,
        #[arg(long)]
        amax: u64,
        #[arg(long)]
        hmax: usize,
    },
    /// Materialize the first N rows of an infinite family.
    Truncate {
        /// Family description, e.g. {"family":"fs","vars":3}.
        spec: PathBuf,
        rows: usize,
    },
    /// Independently re-check a verdict, a witness, or an escaping coloring.
    Recheck(RecheckArgs),
}

#[derive(Subcommand, Debug)]
enum Build {
    /// x, y, x + y
    Schur,
    /// k-term arithmetic progressions a, a + d, …
    Vdw {
        #[arg(long)]
        k: usize,
    },
    /// All nonempty finite sums of n variables.
    Fs {
        #[arg(long)]
        n: usize,
    },
    /// Block diagonal of the given matrices.
    Blockdiag {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
    },
    /// Insert the inner matrices into the outer one, one per outer column.
    Insertion {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        inner: Vec<PathBuf>,
    },
    /// Collapse the columns after the first l of a constant row sum matrix.
    Compress {
        #[arg(long)]
        l: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: Rational,
        matrix: PathBuf,
    },
    /// [[O, B], [A, O], [A, B]] with B = diag(b).
    Combinediag {
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        matrix: PathBuf,
    },
    /// Prepend b times a row to a matrix.
    Augment {
        #[arg(long, allow_hyphen_values = true)]
        b: Rational,
        /// Comma-separated dense row, e.g. "1,0,-1/2".
        #[arg(long, allow_hyphen_values = true)]
        row: String,
        matrix: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    matrix: PathBuf,
    #[arg(long)]
    colors: usize,
    /// Colorings are of [1..N].
    #[arg(long)]
    universe: usize,
    #[arg(long)]
    xmax: u64,
    #[arg(long)]
    strong: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Most colorings examined in this run.
    #[arg(long, env = "IPR_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Counter to continue from, as reported by a budget-exhausted verdict.
    #[arg(long, default_value_t = 0)]
    resume: u64,
    /// Also write an escaping coloring to this file.
    #[arg(long)]
    coloring_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RecheckArgs {
    matrix: PathBuf,
    /// Verdict JSON from `verify`.
    #[arg(long, conflicts_with_all = ["coloring", "witness"])]
    verdict: Option<PathBuf>,
    #[arg(long, required_unless_present = "verdict")]
    coloring: Option<PathBuf>,
    /// Witness JSON; without it the coloring is checked as escaping.
    #[arg(long, requires = "coloring")]
    witness: Option<PathBuf>,
    #[arg(long, required_unless_present = "verdict")]
    xmax: Option<u64>,
    #[arg(long)]
    strong: bool,
}

/// What a command produced.
pub struct Report {
    pub stdout: String,
    pub summary: Option<String>,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.stdout);
            if let Some(s) = report.summary {
                eprintln!("{s}");
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("ipr: {f}");
            ExitCode::from(f.code)
        }
    }
}
