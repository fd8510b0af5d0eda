//! `wdss`: storage capacity, bounds, tradeoff curves and coding simulations
//! for distributed storage with broadcast repair.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wdss_core::frac::parse_q;
use wdss_core::{Error, Q};

#[derive(Parser, Debug)]
#[command(name = "wdss", version, about = "Storage capacity of distributed storage with broadcast repair")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// One JSON document (CSV for curves) on stdout.
    Machine,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Storage nodes.
    #[arg(short = 'n')]
    pub n: Option<usize>,
    /// Nodes a data collector connects to.
    #[arg(short = 'k')]
    pub k: Option<usize>,
    /// Helpers per repair round.
    #[arg(short = 'd')]
    pub d: Option<usize>,
    /// Failures repaired per round.
    #[arg(short = 'r')]
    pub r: Option<usize>,
    /// Repair rounds.
    #[arg(short = 'T')]
    pub t: Option<usize>,
    /// Storage per node, as p/q.
    #[arg(long, value_parser = fraction)]
    pub alpha: Option<Q>,
    /// Packets each helper broadcasts, as p/q.
    #[arg(long, value_parser = fraction)]
    pub beta: Option<Q>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    /// Every schedule and every collector.
    Full,
    /// One schedule per symmetry class, one collector per class.
    Canonical,
    /// Only the worst-case schedule built from the bound.
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Adversarial,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower bound on storage capacity with its optimal cut profile.
    Bound {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Exact min-cut of one collector, one schedule, or a family of schedules.
    Mincut {
        #[command(flatten)]
        params: ParamArgs,
        /// Schedule file in the JSON interchange format.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Restrict to one collector, `s:a,b,c`.
        #[arg(long)]
        collector: Option<String>,
        /// Schedules to minimize over when no instance file is given.
        #[arg(long, value_enum, default_value_t = ScopeArg::Canonical)]
        scope: ScopeArg,
        /// Stop after this many schedules.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Worst-case schedule whose cut meets the bound, checked by max-flow.
    Tightness {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Bound at horizons k+r through k+r+extra.
    Truncation {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2)]
        extra: usize,
    },
    /// Storage versus repair-transmission curve as CSV.
    Tradeoff {
        #[command(flatten)]
        params: ParamArgs,
        /// File size.
        #[arg(long = "B", value_parser = fraction, default_value = "1")]
        file_size: Q,
        /// `auto` or comma-separated β values.
        #[arg(long, default_value = "auto")]
        grid: String,
    },
    /// Random linear network coding over a repair schedule.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// File size in packets; defaults to the bound.
        #[arg(long = "B")]
        file_size: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Field GF(2^w); w is 4, 8 or 16.
        #[arg(long, default_value_t = 8)]
        field: u32,
        /// Schedule to simulate when no instance file is given.
        #[arg(long, value_enum, default_value_t = SourceArg::Adversarial)]
        source: SourceArg,
    },
    /// The two-round example schedule, its graph and the two named cuts.
    Figure1 {
        #[arg(long, value_parser = fraction, default_value = "1")]
        alpha: Q,
        #[arg(long, value_parser = fraction, default_value = "1")]
        beta: Q,
    },
    /// Broadcast curve and both schemes' endpoints for k=4, d=9, r=2.
    Figure4 {
        #[arg(long = "B", value_parser = fraction, default_value = "1")]
        file_size: Q,
        #[arg(long, default_value = "auto")]
        grid: String,
    },
}

fn fraction(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

/// Failures mapped to process exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invariant(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invariant(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invariant(m) | Failure::Input(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
