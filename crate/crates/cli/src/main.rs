use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jackstein::chain::ChainKind;
use jackstein::partition::Partition;
use jackstein::scalar::{int, parse_scalar, Scalar};
use jackstein::verify::DEFAULT_EXACT_CAP;

mod commands;
mod error;
mod table;

use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "jackstein",
    version,
    about = "Exact Jack measure, partition chains and Stein bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Degree n (default 4; for verify the cap, for clt the top of 2..=12).
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Jack parameter as an integer or p/q.
    #[arg(long, default_value = "1", value_parser = parse_alpha)]
    alpha: Scalar,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the Jack measure on partitions of n.
    Measure {
        #[command(flatten)]
        common: Common,
    },
    /// Dump a transition matrix, or its r-step law from a start state.
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_kind)]
        kind: ChainKind,
        #[arg(long)]
        steps: Option<usize>,
        /// Start partition such as [2,1,1]; defaults to (1^n).
        #[arg(long, value_parser = parse_partition)]
        start: Option<Partition>,
    },
    /// Monte Carlo summary of W from the exact growth sampler.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Exact Kolmogorov distance and Stein bound over a list of degrees.
    Clt {
        #[command(flatten)]
        common: Common,
        /// Comma-separated degrees; defaults to 2..=n.
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
    },
    /// Run every exact identity for degrees up to n.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Largest degree the suite accepts.
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        cap: usize,
        /// Use only --alpha instead of the default set {1, 3/2, 2, 3}.
        #[arg(long)]
        single_alpha: bool,
    },
    /// Dump the power-sum coefficient table of the Jack polynomials.
    Theta {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_alpha(s: &str) -> Result<Scalar, String> {
    let a = parse_scalar(s).map_err(|e| e.to_string())?;
    if a <= int(0) {
        return Err(format!("alpha must be positive, got {a}"));
    }
    Ok(a)
}

fn parse_kind(s: &str) -> Result<ChainKind, String> {
    s.parse()
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse()
        .map_err(|e: jackstein::error::Error| e.to_string())
}

fn run(cli: Cli) -> Result<(String, Option<PathBuf>, bool), CliError> {
    let (text, common, ok) = match cli.command {
        Command::Measure { common } => (commands::measure(&common.config(4))?, common, true),
        Command::Chain {
            common,
            kind,
            steps,
            start,
        } => (
            commands::chain(&common.config(4), kind, steps, start)?,
            common,
            true,
        ),
        Command::Sample {
            common,
            seed,
            samples,
        } => {
            let mut cfg = common.config(4);
            cfg.seed = seed;
            cfg.samples = samples;
            (commands::sample(&cfg)?, common, true)
        }
        Command::Clt { common, n_list } => {
            let cfg = common.config(12);
            let list = if n_list.is_empty() {
                (2..=cfg.n).collect()
            } else {
                n_list
            };
            (commands::clt(&cfg, &list)?, common, true)
        }
        Command::Verify {
            common,
            cap,
            single_alpha,
        } => {
            let (text, ok) = commands::verify(&common.config(cap), cap, single_alpha)?;
            (text, common, ok)
        }
        Command::Theta { common } => (commands::theta(&common.config(4))?, common, true),
    };
    Ok((text, common.out, ok))
}

impl Common {
    fn config(&self, default_n: usize) -> commands::RunConfig {
        commands::RunConfig {
            n: self.n.unwrap_or(default_n),
            alpha: self.alpha.clone(),
            seed: 0,
            samples: 0,
            format: self.format,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, out, ok)) => {
            if let Err(e) = emit(&text, out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(text: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(&path, text).map_err(|source| CliError::Write { path, source })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
