mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "chevfiber", version, about = "Weyl-group invariants, restriction and fiber solving")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input file (pair configuration, or pairs database for `classify`).
    #[arg(long, global = true)]
    pub config: Option<String>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Residual acceptance tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long = "degree-bound", global = true, default_value_t = 12)]
    pub degree_bound: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root count, Weyl group order and fundamental degrees.
    Roots {
        /// Type label such as `A2`, or a family letter with --rank.
        #[arg(long = "type")]
        label: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// The generated invariant family and its Jacobian degree.
    Invariants {
        #[arg(long = "type")]
        label: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Restrict the ambient family of a pair configuration.
    Restrict,
    /// Solve U(ζ; x) = a for a pair configuration.
    Fiber {
        /// Comma-separated complex entries, each `re` or `re:im`.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        zeta: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Solve U(Λ; x) = U(0; λ).
    Lambda {
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        zeta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Tabulate the pairs database with its classification flags.
    Classify {
        /// Comma-separated conjunction of: exceptional, b_exceptional, split, all.
        #[arg(long, default_value = "all")]
        filter: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Integrity(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Integrity(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// A rendered report plus an optional verdict line for stderr.
pub struct Report {
    pub body: String,
    pub verdict: Option<(String, bool)>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CHEVFIBER_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("CHEVFIBER_THREADS must be a non-negative integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let report = commands::dispatch(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &report.body).map_err(|e| CliError::Usage(format!("{path}: {e}")))?,
        None => print!("{}", report.body),
    }
    Ok(match report.verdict {
        Some((line, ok)) => {
            eprintln!("{line}");
            ok
        }
        None => true,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
