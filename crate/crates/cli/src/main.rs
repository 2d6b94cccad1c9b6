//! `cycloschur`: tabulate Schur values at roots of unity and run the
//! unimodularity checks from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};

use output::{Report, Status};

#[derive(Parser, Debug)]
#[command(name = "cycloschur", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of the n-th cyclotomic polynomial and of its reciprocal series.
    Phi {
        n: Option<u64>,
        #[arg(long = "n", id = "n_flag")]
        n_flag: Option<u64>,
        /// Number of series coefficients after the constant term.
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// s_λ at the primitive n-th roots for every λ in a box.
    SchurTable {
        n: Option<u64>,
        max_len: Option<usize>,
        max_part: Option<usize>,
        #[arg(long = "n", id = "n_flag")]
        n_flag: Option<u64>,
        #[arg(long = "max-len", id = "max_len_flag")]
        max_len_flag: Option<usize>,
        #[arg(long = "max-part", id = "max_part_flag")]
        max_part_flag: Option<usize>,
    },
    /// Direct, structural and gate checks for one n.
    Verify {
        n: Option<u64>,
        max_part: Option<usize>,
        #[arg(long = "n", id = "n_flag")]
        n_flag: Option<u64>,
        #[arg(long = "max-part", id = "max_part_flag")]
        max_part_flag: Option<usize>,
        /// Largest number of subsets enumerated before falling back to search.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Total unimodularity of a matrix read from a JSON file.
    TuCheck {
        path: Option<PathBuf>,
        #[arg(long = "matrix", id = "matrix_flag")]
        matrix: Option<PathBuf>,
        /// Sampled submatrices when the matrix is too large for enumeration.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every square submatrix regardless of size.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Search for two bases with different |det| in a tensor product of maximal circuits.
    Witness {
        /// Dimensions of the maximal circuits.
        #[arg(required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The complete bipartite tree/graph pair and its network matrix.
    NetworkDemo {
        m: Option<usize>,
        n: Option<usize>,
    },
}

fn pick<T>(positional: Option<T>, flag: Option<T>, name: &str) -> anyhow::Result<T> {
    match (positional, flag) {
        (Some(_), Some(_)) => Err(anyhow!("{name} given both positionally and as --{name}")),
        (Some(v), None) | (None, Some(v)) => Ok(v),
        (None, None) => Err(anyhow!("missing {name}")),
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("CYCLOSCHUR_THREADS") {
        let threads: usize = v
            .parse()
            .map_err(|_| anyhow!("CYCLOSCHUR_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Phi { n, n_flag, terms } => commands::phi(pick(*n, *n_flag, "n")?, *terms),
        Command::SchurTable {
            n,
            max_len,
            max_part,
            n_flag,
            max_len_flag,
            max_part_flag,
        } => commands::schur_table(
            pick(*n, *n_flag, "n")?,
            pick(*max_len, *max_len_flag, "max-len")?,
            pick(*max_part, *max_part_flag, "max-part")?,
        ),
        Command::Verify {
            n,
            max_part,
            n_flag,
            max_part_flag,
            budget,
            seed,
        } => {
            let max_part = match (max_part, max_part_flag) {
                (None, None) => commands::DEFAULT_VERIFY_MAX_PART,
                _ => pick(*max_part, *max_part_flag, "max-part")?,
            };
            commands::verify(pick(*n, *n_flag, "n")?, max_part, *budget, *seed)
        }
        Command::TuCheck {
            path,
            matrix,
            budget,
            seed,
            exhaustive,
        } => commands::tu_check(&pick(path.clone(), matrix.clone(), "matrix")?, *budget, *seed, *exhaustive),
        Command::Witness { dims, budget, seed } => commands::witness(dims, *budget, *seed),
        Command::NetworkDemo { m, n } => commands::network_demo(m.unwrap_or(2), n.unwrap_or(3)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| dispatch(&cli)).and_then(|report| {
        let rendered = report.render(cli.format)?;
        match &cli.out {
            Some(path) => std::fs::write(path, rendered)?,
            None => print!("{rendered}"),
        }
        Ok(report.status)
    });
    // every error, usage or otherwise, exits with 2
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
