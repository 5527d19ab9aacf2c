use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fpb_cli::commands::{cmd_gaps, cmd_simulate, cmd_sweep, CliError, SweepSpec, DEFAULT_STEPS};
use fpb_cli::report::ReportRecord;
use fpb_cli::verify::cmd_verify;
use fpb_core::curves::CurveId;
use fpb_core::probe::{ErrorProbability, ProbeKind};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fpb",
    version,
    about = "Entangling-probe information curves for BB84"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate information curves on a uniform P_E grid as CSV.
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        pe_min: f64,
        #[arg(long, default_value_t = ErrorProbability::MAX)]
        pe_max: f64,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Evaluate a single point instead of a grid.
        #[arg(long, conflicts_with_all = ["pe_min", "pe_max", "steps"])]
        pe: Option<f64>,
        /// Comma-separated curve ids (default: all).
        #[arg(long, value_delimiter = ',')]
        curves: Option<Vec<CurveId>>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest Rényi-over-conclusive gaps and the small-P_E ratio.
    Gaps,
    /// Monte Carlo run checked against the analytic table.
    Simulate {
        #[arg(long)]
        pe: f64,
        #[arg(long, default_value = "helstrom")]
        kind: ProbeKind,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run the invariant suite.
    Verify,
}

fn emit(report: &ReportRecord, json: bool) -> ExitCode {
    if json {
        println!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Sweep {
            pe_min,
            pe_max,
            steps,
            pe,
            curves,
            out,
        } => {
            let curves = curves.unwrap_or_else(|| CurveId::ALL.to_vec());
            let spec = match pe {
                Some(p) => SweepSpec::point(p, curves),
                None => SweepSpec {
                    pe_min,
                    pe_max,
                    steps,
                    curves,
                },
            };
            let (csv, report) = cmd_sweep(&spec, out.as_deref())?;
            if cli.json {
                println!("{}", report.render_json());
            } else if out.is_none() {
                print!("{csv}");
            } else {
                print!("{}", report.render_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gaps => Ok(emit(&cmd_gaps()?, cli.json)),
        Command::Simulate {
            pe,
            kind,
            trials,
            seed,
        } => Ok(emit(&cmd_simulate(pe, kind, trials, seed)?, cli.json)),
        Command::Verify => Ok(emit(&cmd_verify(), cli.json)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fpb: {e}");
            match e {
                CliError::Usage(_) | CliError::Io { .. } => ExitCode::from(EXIT_USAGE),
                _ => ExitCode::from(EXIT_FAILED),
            }
        }
    }
}
