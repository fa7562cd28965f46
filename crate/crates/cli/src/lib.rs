//! Command-line front end for `sosrank-core`.
//!
//! Forms and decompositions travel as JSON on stdin/stdout (or files via
//! `--in`/`--out`); `scan` and `table` emit CSV.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod error;
pub mod format;

pub use error::{CliError, Status};

#[derive(Debug, Parser)]
#[command(
    name = "sosrank",
    version,
    about = "Sum-of-squares rank tools for biquadratic forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named family as form JSON.
    ///
    /// Families: P m n s | cyclic m | Q m n | T m n i j k l |
    /// W m n i j k l a_ik a_jl a_il a_jk | Pplus | full m n |
    /// diagonal m n a_11 ... a_mn (row-major). Indices are 1-based.
    Gen {
        family: String,
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Decompose a form into a verified sum of squares.
    Decompose {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a decomposition against a form exactly.
    Verify {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
    },
    /// Print the rank lower-bound certificate of a simple or diagonal form.
    Certify {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Bound the rank of all 512 simple 3x3 forms.
    Scan {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric local search for a factor with a given number of squares.
    Oracle {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = sosrank_core::oracle::SearchConfig::DEFAULT_SEED)]
        seed: u64,
    },
    /// Print known bounds on the worst-case rank.
    Table {
        #[arg(long = "max-m", default_value_t = 6)]
        max_m: usize,
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: usize,
    },
    /// Run the exhaustive rectangle lemma and cyclic compatibility checks.
    Lemmas {
        #[arg(long = "max-m", default_value_t = 12)]
        max_m: usize,
    },
}

/// Standard streams of one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> Status
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let to_stdout = !e.use_stderr();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if to_stdout { io.stdout } else { io.stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return if to_stdout { Status::Ok } else { Status::Usage };
        }
    };
    match commands::dispatch(cli.command, io) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.status()
        }
    }
}
