use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rwa_core::runner::{compare_files, load_scenario, run_file, sweep};
use rwa_core::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SINGULARITY: u8 = 3;
const EXIT_TRUNCATION: u8 = 4;

/// Two-level atom and Jaynes-Cummings scenario runner.
#[derive(Parser)]
#[command(name = "rwa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its time-series table.
    Run {
        /// Scenario TOML, or a table written by an earlier run.
        file: PathBuf,
        /// Output directory (default: $RWA_OUT_DIR or the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail with exit code 4 when the run is flagged truncation_suspect.
        #[arg(long)]
        strict: bool,
    },
    /// Run two scenarios and write a sample-by-sample comparison.
    Compare {
        /// Reference scenario; its time grid is used.
        a: PathBuf,
        /// Scenario compared against `a`.
        b: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a scenario against its counterpart model over parameter values.
    Sweep {
        /// Base scenario.
        file: PathBuf,
        /// Numeric field, e.g. `g`, `params.g`, `t_final` or `detuning`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn out_dir(out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| std::env::var_os("RWA_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } => EXIT_CONFIG,
        Error::Singularity { .. } => EXIT_SINGULARITY,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn dispatch(command: Command) -> rwa_core::Result<u8> {
    match command {
        Command::Run { file, out, strict } => {
            let (run, path) = run_file(&file, &out_dir(out))?;
            println!("{}", path.display());
            for flag in &run.series.flags {
                eprintln!("warning: run flagged {flag}");
            }
            if strict && run.truncation_suspect() {
                eprintln!("error: truncation_suspect escalated by --strict");
                return Ok(EXIT_TRUNCATION);
            }
            Ok(0)
        }
        Command::Compare { a, b, out } => {
            let report = compare_files(&a, &b)?;
            let path = report.write(&out_dir(out))?;
            let s = &report.summary;
            println!("{}", path.display());
            println!(
                "max_deviation {:e} at t = {:e}; mean_deviation {:e}; min_fidelity {:e}",
                s.max_deviation, s.time_of_max, s.mean_deviation, s.min_fidelity
            );
            Ok(0)
        }
        Command::Sweep {
            file,
            param,
            values,
            out,
        } => {
            let (label, sc) = load_scenario(&file)?;
            let table = sweep(&label, &sc, &param, &values)?;
            let path = table.write(&out_dir(out))?;
            println!("{}", path.display());
            Ok(0)
        }
    }
}
