use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod input;

use commands::{DegenerateArgs, Direction, Format, Output};

/// Exact computations for blow-up formulae of Gromov-Witten invariants.
#[derive(Parser)]
#[command(name = "gwcalc", version)]
struct Cli {
    /// Truncation order G (genera 0..=G).
    #[arg(long, global = true, env = "GWCALC_ORDER", default_value_t = 12)]
    order: usize,

    /// Output format; verify-paper defaults to table, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Enumeration caps, e.g. components=3,mu=6 (also degree=, triples=).
    #[arg(long, global = true, default_value = "")]
    caps: String,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print coefficients of sinc_half^k, sinc_scaled(d)^k or sin_u_over_u^k.
    Series {
        expr: String,
    },
    /// Solve H = C * P for the universal coefficients C.
    Solve {
        /// JSON genus sequence H.
        #[arg(long = "h")]
        h: PathBuf,
        /// JSON genus sequence P (P_0 must be nonzero).
        #[arg(long = "p")]
        p: PathBuf,
    },
    /// Survivor report for a preset or geometry file, or evaluation against
    /// invariant tables.
    Degenerate {
        /// Preset name or path to a geometry document.
        target: String,
        #[arg(long)]
        plus_table: Option<PathBuf>,
        #[arg(long)]
        minus_table: Option<PathBuf>,
        /// Largest genus reported.
        #[arg(long, default_value_t = 5)]
        genus_max: u32,
        /// Generic minus-side insertions (report: up to this many, default 3;
        /// evaluation: exactly this many, default 1).
        #[arg(long)]
        minus_marks: Option<usize>,
    },
    /// Convert GW records to BPS numbers or back.
    Bps {
        /// JSON record or array of records.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "to-bps")]
        direction: Direction,
    },
    /// Run every verification check and print a pass/fail matrix.
    VerifyPaper {
        #[arg(long)]
        seed: Option<u64>,
        /// Random samples per randomized check.
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<Output> {
    let caps = commands::parse_caps(&cli.caps)?;
    let fmt = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Series { expr } => commands::series(expr, cli.order, fmt),
        Command::Solve { h, p } => commands::solve(h, p, fmt),
        Command::Degenerate {
            target,
            plus_table,
            minus_table,
            genus_max,
            minus_marks,
        } => commands::degenerate(
            &DegenerateArgs {
                target,
                plus_table: plus_table.as_deref(),
                minus_table: minus_table.as_deref(),
                genus_max: *genus_max,
                minus_marks: *minus_marks,
            },
            &caps,
            fmt,
        ),
        Command::Bps { input, direction } => commands::bps(input, *direction, fmt),
        Command::VerifyPaper { seed, samples } => commands::verify(
            cli.order,
            &caps,
            *seed,
            *samples,
            cli.format.unwrap_or(Format::Table),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &output.text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{}", output.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if output.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
