//! `ncqosc`: batch runs, figure regeneration and self-validation.
//!
//! Exit codes: 0 success, 1 validation or numeric failure, 2 config or
//! request error, 3 time outside a reality window.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod csvout;
mod figures;
mod run;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncqosc_core::validate::validate;
use ncqosc_core::{CaseId, ScenarioParams};

use config::LoadedConfig;
use figures::Figure;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Window(String),
    Numeric(String),
    Io(String),
    ValidationFailed(Vec<&'static str>),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Window(_) => 3,
            CliError::Numeric(_) | CliError::Io(_) | CliError::ValidationFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Window(m) => write!(f, "reality window violated: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::ValidationFailed(names) => write!(f, "validation failed: {}", names.join(", ")),
        }
    }
}

#[derive(Parser)]
#[command(name = "ncqosc", version, about = "Damped charged oscillator on a time-dependent noncommutative phase space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog cases.
    Cases,
    /// Evaluate one case on a time grid and write its CSV bundle.
    Run(RunArgs),
    /// Run every catalog case with one config, each into its own directory.
    Sweep(GridArgs),
    /// Regenerate a figure's curves as CSV and SVG.
    Figures {
        which: Figure,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run every self-check suite; JSON report on stdout, summary on stderr.
    Validate {
        /// Constants to check; the first figure's constants when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    config: PathBuf,
    /// End of the time grid; `5/Gamma` when omitted.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    samples: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Case id such as `set1-case2`; falls back to the config's `case`.
    #[arg(long)]
    case: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
}

fn load_grid(args: &GridArgs) -> Result<(LoadedConfig, Vec<f64>), CliError> {
    let cfg = LoadedConfig::load(&args.config)?;
    let t_max = args.t_max.unwrap_or(5.0 / cfg.params.gamma);
    let grid = run::time_grid(t_max, args.samples)?;
    Ok((cfg, grid))
}

fn report(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let (cfg, grid) = load_grid(&args.grid)?;
    let case = match &args.case {
        Some(c) => c.parse::<CaseId>().map_err(|e| CliError::Config(e.to_string()))?,
        None => cfg
            .case
            .ok_or_else(|| CliError::Config(format!("no --case given and {} names no case", args.grid.config.display())))?,
    };
    report(&run::run_case(&cfg, case, &grid, &args.grid.out)?);
    Ok(())
}

fn cmd_validate(config: Option<&Path>) -> Result<(), CliError> {
    let params = match config {
        Some(p) => LoadedConfig::load(p)?.params,
        None => ScenarioParams::fig1(),
    };
    let report = validate(&params);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
    eprint!("{}", report.summary());
    if report.passed {
        Ok(())
    } else {
        Err(CliError::ValidationFailed(report.failed()))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Cases => {
            for c in CaseId::ALL {
                println!("{:<11} {}", c.as_str(), c.description());
            }
            Ok(())
        }
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => {
            let (cfg, grid) = load_grid(&args)?;
            report(&run::sweep(&cfg, &grid, &args.out)?);
            Ok(())
        }
        Command::Figures { which, out } => {
            report(&figures::figure(which, &out)?);
            Ok(())
        }
        Command::Validate { config } => cmd_validate(config.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncqosc: {e}");
            ExitCode::from(e.code())
        }
    }
}
