//! `qmark`: command-line access to the Stern-Brocot sequences, the question
//! mark function, moments and recurrence coefficients.

mod cache;
mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qmark::moments::SystemVariant;

#[derive(Parser)]
#[command(name = "qmark", version, about = "Recurrence coefficients and moments of the ?(x) measure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SeqFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RecurMethod {
    Stieltjes,
    Chebyshev,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VariantArg {
    A,
    B,
}

impl From<VariantArg> for SystemVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::A => SystemVariant::A,
            VariantArg::B => SystemVariant::B,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the Stern-Brocot level N of [0, 1].
    Seq {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: SeqFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate q at a rational "p/q" (exactly) or a decimal.
    Q {
        x: String,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Solve a truncated moment system and cache the result.
    Moments {
        #[arg(long, value_enum, default_value = "a")]
        variant: VariantArg,
        #[arg(long = "K", default_value_t = 500)]
        k: usize,
        #[arg(long, default_value_t = 400)]
        terms: usize,
        #[arg(long, default_value_t = 400)]
        digits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute recurrence coefficients (CSV, or JSON for a .json output).
    Recur {
        #[arg(long, value_enum)]
        method: RecurMethod,
        /// Level for the Stieltjes procedure.
        #[arg(long = "N", required_if_eq("method", "stieltjes"))]
        n: Option<u32>,
        /// Moment file written by `qmark moments`.
        #[arg(long, required_if_eq("method", "chebyshev"))]
        moments_file: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        /// Defaults to 100 for stieltjes and 400 for chebyshev.
        #[arg(long)]
        digits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagnostics for a coefficient file: geometric means, averages,
    /// zeros and plot data.
    Analyze {
        #[arg(long)]
        coeffs_file: PathBuf,
        /// JSON report; plot data goes next to it as .a2.dat and .g.dat.
        #[arg(long)]
        report: PathBuf,
        /// Degrees whose zeros are included in the report.
        #[arg(long, value_delimiter = ',')]
        zeros: Vec<usize>,
        /// Precision for reading CSV input.
        #[arg(long, default_value_t = 400)]
        digits: u32,
    },
}

fn exit_code(err: &qmark::Error) -> u8 {
    if err.is_numeric() {
        3
    } else if matches!(err, qmark::Error::Io(_)) {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Seq { n, format, out } => commands::seq(n, format, out.as_deref()),
        Command::Q { x, digits } => commands::q(&x, digits),
        Command::Moments { variant, k, terms, digits, out } => {
            commands::moments(variant.into(), k, terms, digits, out.as_deref())
        }
        Command::Recur { method, n, moments_file, n_max, digits, out } => {
            commands::recur(method, n, moments_file.as_deref(), n_max, digits, out.as_deref())
        }
        Command::Analyze { coeffs_file, report, zeros, digits } => {
            commands::analyze(&coeffs_file, &report, &zeros, digits)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let message = err.to_string().replace('\n', " ");
            eprintln!("qmark: error: {message}");
            ExitCode::from(exit_code(&err))
        }
    }
}
