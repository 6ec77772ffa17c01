//! `unclab`: batch front end for the uncertainty-product library.
//!
//! Exit codes: 0 when everything passes, 2 for usage or input errors, and
//! otherwise the number of failing rows or criteria (capped at 125).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use unclab::asymptotics::LimitFamily;
use unclab::StateKind;

use commands::{CliError, CliResult, StateParams};
use output::{emit, Format, OutputOptions, Report};

/// Closed-form comparison tolerance when neither --tol nor the environment sets one.
const DEFAULT_TOL: f64 = 1e-8;
const TOL_ENV: &str = "UNCLAB_DEFAULT_TOL";

#[derive(Parser)]
#[command(name = "unclab", version, about = "Position-momentum uncertainty products of 1D bound states (hbar = m = 1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for grids and sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,

    /// Closed-form comparison tolerance (overrides UNCLAB_DEFAULT_TOL).
    #[arg(long, global = true, value_parser = positive)]
    tol: Option<f64>,

    /// Omit the metadata header from JSON and CSV output.
    #[arg(long, global = true)]
    no_meta: bool,

    /// Add the generation time to the metadata header.
    #[arg(long, global = true, conflicts_with = "no_meta")]
    timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog states and their parameters.
    List,
    /// Uncertainty product of one state by every available route.
    Uncertainty {
        #[command(flatten)]
        state: StateArgs,
        /// Also compute U from the numerical momentum wavefunction.
        #[arg(long)]
        momentum: bool,
        /// Momentum cutoff for --momentum.
        #[arg(long, value_parser = positive)]
        pmax: Option<f64>,
    },
    /// Reproduce the seven rows of Table 1.
    Table1,
    /// Deep-well scan of the closed-form SRM or Morse product.
    Limits {
        #[arg(value_parser = parse_family)]
        family: LimitFamily,
        #[arg(long, default_value_t = 2.0)]
        min: f64,
        #[arg(long, default_value_t = 1048576.0)]
        max: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Momentum wavefunction on a grid, with closed-form and Parseval checks.
    Fourier {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_parser = positive)]
        pmax: Option<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Load a tabulated state and report what was reconstructed.
    Ingest {
        /// CSV file with an `x,psi` header.
        #[arg(long)]
        file: PathBuf,
        /// Kink locations, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        kinks: Vec<f64>,
    },
    /// Run the full acceptance suite.
    CheckAll,
}

#[derive(Args)]
struct StateArgs {
    /// delta-well, delta-in-box, idw, ho, srm, morse, lorentzian or tabulated
    #[arg(value_parser = parse_kind)]
    state: StateKind,
    /// Width (idw) or wall distance (delta-in-box); default 1.
    #[arg(long)]
    a: Option<f64>,
    /// Inverse length (delta-well) or width (lorentzian); default 1.
    #[arg(long)]
    alpha: Option<f64>,
    /// SRM depth parameter, 1 or 2; default 1.
    #[arg(long)]
    s: Option<f64>,
    /// Morse parameter; default 1.
    #[arg(long)]
    lambda: Option<f64>,
    /// Samples for a tabulated state (`x,psi` header).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Kink locations for a tabulated state, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    kinks: Vec<f64>,
}

impl StateArgs {
    fn params(&self) -> StateParams {
        StateParams { a: self.a, alpha: self.alpha, s: self.s, lambda: self.lambda, file: self.file.clone(), kinks: self.kinks.clone() }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn parse_kind(s: &str) -> Result<StateKind, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = StateKind::ALL.iter().map(|k| k.as_str()).collect();
        format!("unknown state '{s}' (expected one of {})", names.join(", "))
    })
}

fn parse_family(s: &str) -> Result<LimitFamily, String> {
    s.parse().map_err(|e: unclab::Error| e.to_string())
}

/// --tol, else UNCLAB_DEFAULT_TOL, else the built-in default.
fn resolve_tol(flag: Option<f64>) -> CliResult<f64> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(v) => positive(v.trim()).map_err(|e| CliError::Usage(format!("{TOL_ENV}: {e}"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn exit_code(failures: usize) -> ExitCode {
    ExitCode::from(failures.min(125) as u8)
}

fn finish<R: Report>(report: &R, opts: &OutputOptions, failures: usize) -> CliResult<usize> {
    emit(report, opts).map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
    Ok(failures)
}

fn run(cli: Cli) -> CliResult<usize> {
    let tol = resolve_tol(cli.tol)?;
    let opts = OutputOptions {
        format: cli.format,
        path: cli.output.clone(),
        meta: !cli.no_meta,
        timestamp: cli.timestamp,
        command_line: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
    };
    match cli.command {
        Command::List => finish(&commands::list(), &opts, 0),
        Command::Uncertainty { state, momentum, pmax } => {
            let spec = commands::build_state(state.state, &state.params())?;
            let r = commands::uncertainty_cmd(&spec, momentum, pmax, tol)?;
            finish(&r, &opts, r.failures())
        }
        Command::Table1 => {
            let r = commands::table1(tol);
            finish(&r, &opts, r.failures)
        }
        Command::Limits { family, min, max, points } => finish(&commands::limits(family, min, max, points)?, &opts, 0),
        Command::Fourier { state, pmax, samples } => {
            let spec = commands::build_state(state.state, &state.params())?;
            finish(&commands::fourier(&spec, pmax, samples)?, &opts, 0)
        }
        Command::Ingest { file, kinks } => {
            let spec = commands::build_state(StateKind::Tabulated, &StateParams { file: Some(file), kinks, ..Default::default() })?;
            finish(&commands::ingest(&spec)?, &opts, 0)
        }
        Command::CheckAll => {
            let r = commands::check_all(tol);
            finish(&r, &opts, r.failures)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads as usize).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {} threads: {e}", cli.threads);
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(failures) => exit_code(failures),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
