//! Command-line front end for the catalog of Leibniz / almost-metriplectic
//! systems: list systems, run delay or static simulations to CSV, drive the
//! verification suites, construct revisited systems and plot orbits as SVG.

mod checks;
mod config;
mod csvio;
mod revisit;
mod run;
mod svg;

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use metriplectic::default_catalog;

/// Exit codes: 0 ok, 1 check failure, 2 unknown name, 3 invalid argument,
/// 4 numerical blow-up, 5 malformed input file.
#[derive(Debug)]
pub enum CliError {
    CheckFailure(String),
    Unknown(String),
    Invalid(String),
    BlowUp(f64),
    Malformed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::CheckFailure(_) => 1,
            CliError::Unknown(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::BlowUp(_) => 4,
            CliError::Malformed(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::CheckFailure(m) => format!("check failure: {m}"),
            CliError::Unknown(m) => format!("unknown system `{m}`"),
            CliError::Invalid(m) => format!("invalid argument: {m}"),
            CliError::BlowUp(t) => format!("numerical blow-up at t = {t}"),
            CliError::Malformed(m) => format!("malformed input file: {m}"),
        }
    }
}

impl From<metriplectic::Error> for CliError {
    fn from(e: metriplectic::Error) -> Self {
        match e {
            metriplectic::Error::UnknownSystem(n) => CliError::Unknown(n),
            metriplectic::Error::BlowUp { t } => CliError::BlowUp(t),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "metriplectic",
    about = "Leibniz and almost-metriplectic systems with constant delay: simulate, verify, revisit, plot",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the system catalog with parameters and invariants
    List {
        /// Only show systems whose name contains this substring
        #[arg(long)]
        filter: Option<String>,
    },
    /// Integrate a catalog system and write the trajectory as CSV
    Run(RunArgs),
    /// Run the verification suite (gradients, symmetry, bracket laws,
    /// structural residuals, annihilation identities)
    Check {
        /// `all` or a single system name
        #[arg(long, default_value = "all")]
        scope: String,
        /// Trials for the bracket-law checks
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Random points per residual check
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also score deliberately broken fixtures (the run then exits 1)
        #[arg(long)]
        planted: bool,
    },
    /// Construct the revisited (dissipative) variant of a system and report
    /// the metric, annihilation residual and display comparisons
    Revisit(revisit::RevisitArgs),
    /// Render a trajectory CSV as an SVG orbit figure
    Plot {
        /// Input CSV produced by `run`
        #[arg(long)]
        csv: PathBuf,
        /// Two or three comma-separated column names, e.g. `x1,x2` or `x1,x2,x3`
        #[arg(long)]
        axes: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Key = value config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<String>,
    /// Parameter override, repeatable: -P a1=0.6
    #[arg(short = 'P', long = "param", value_name = "KEY=VAL")]
    params: Vec<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, value_name = "constant|polynomial")]
    history_kind: Option<String>,
    /// Constant: `v1,v2,...`; polynomial: `c0 c1; c0; c0 c1 c2` (per coordinate, ascending powers of θ)
    #[arg(long)]
    history_values: Option<String>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    steps_per_delay: Option<usize>,
    /// Step size for static (τ = 0) systems
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    record_every: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Integrate the verbatim displayed components instead of the
    /// bracket-assembled field
    #[arg(long)]
    paper_literal: bool,
}

fn parse_param_overrides(pairs: &[String]) -> Result<HashMap<String, f64>, CliError> {
    let mut map = HashMap::new();
    for p in pairs {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("parameter `{p}` is not KEY=VAL")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("parameter value `{v}` is not a number")))?;
        map.insert(k.trim().to_string(), value);
    }
    Ok(map)
}

fn cmd_list(filter: Option<&str>) -> Result<i32, CliError> {
    let entries = default_catalog();
    let mut shown = 0;
    println!("{:<28} {:>3}  {:<7} {}", "name", "dim", "kind", "parameters (defaults) / invariants");
    for e in entries {
        if let Some(f) = filter {
            if !e.name.contains(f) {
                continue;
            }
        }
        shown += 1;
        let params = e
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let kind = if e.is_delay { "delay" } else { "static" };
        println!("{:<28} {:>3}  {:<7} {}", e.name, e.dim, kind, params);
        if !e.invariants.is_empty() {
            let invs = e.invariants.iter().map(|i| i.label.as_str()).collect::<Vec<_>>().join(", ");
            println!("{:<28} {:>3}  {:<7} invariants: {}", "", "", "", invs);
        }
    }
    if shown == 0 {
        println!("(no systems match)");
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::List { filter } => cmd_list(filter.as_deref()),
        Command::Run(args) => run::cmd_run(args),
        Command::Check {
            scope,
            trials,
            samples,
            seed,
            planted,
        } => checks::run(&checks::CheckOptions {
            scope,
            trials,
            samples,
            seed,
            planted,
        }),
        Command::Revisit(args) => revisit::cmd_revisit(args),
        Command::Plot { csv, axes, out } => {
            let data = csvio::read_csv(&csv)?;
            let axes: Vec<String> = axes.split(',').map(|a| a.trim().to_string()).collect();
            svg::plot(&data, &axes, &out)?;
            println!("wrote {}", out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
