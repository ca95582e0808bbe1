//! Command-line front end for `edgedim`.
//!
//! Exit codes: 0 success, 1 internal failure, 2 usage or configuration error,
//! 3 infeasible (any point of a sweep), 4 a validation check failed.

pub mod commands;
pub mod config;
pub mod grid;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Check, CliError, Outcome};
use config::ScenarioConfig;
use edgedim::dimension::Regime;

#[derive(Debug, Parser)]
#[command(name = "edgedim", version, about = "Bandwidth and edge-compute dimensioning for multi-cell video analytics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (TOML); baseline values when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Overrides the scenario regime.
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum RegimeArg {
    NoiseLimited,
    InterferenceLimited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum WhichArg {
    Geometry,
    CapacityNl,
    CapacityIl,
    Queue,
    EndToEnd,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ergodic capacity over a grid of distances, bandwidths or network parameters.
    CapacitySweep {
        #[command(flatten)]
        common: Common,
        /// `name=values`, repeatable; names r, b or any scenario parameter.
        #[arg(long)]
        axis: Vec<String>,
        /// Bandwidth in Hz when b is not swept.
        #[arg(long, default_value_t = 1e6)]
        bandwidth: f64,
        /// Distance in km when r is not swept.
        #[arg(long, default_value_t = 0.5)]
        distance: f64,
    },
    /// Optimal bandwidth and compute; JSON for one scenario, CSV for a sweep.
    Dimension {
        #[command(flatten)]
        common: Common,
        /// `name=values`, repeatable.
        #[arg(long)]
        axis: Vec<String>,
        /// Scale delta with lambda_b so that lambda_b/delta stays at its configured value.
        #[arg(long)]
        proportional_reuse: bool,
    },
    /// Trade-off sweep over beta1.
    Pareto {
        #[command(flatten)]
        common: Common,
        /// beta1 values; i/22 for i = 1..21 when omitted.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Compare closed forms with Monte Carlo estimates.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        which: Vec<WhichArg>,
        /// Samples per check; per-check default when omitted.
        #[arg(long)]
        n: Option<u64>,
        /// Loads for the queue check.
        #[arg(long, value_delimiter = ',', default_value = "0.8")]
        rho: Vec<f64>,
        /// Bandwidth in Hz for the capacity checks.
        #[arg(long, default_value_t = 1e6)]
        bandwidth: f64,
        /// Distance in km for the capacity checks.
        #[arg(long, default_value_t = 0.5)]
        distance: f64,
    },
    /// Print the scenario with every default filled in.
    PrintConfig {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::CapacitySweep { common, .. }
            | Command::Dimension { common, .. }
            | Command::Pareto { common, .. }
            | Command::Validate { common, .. }
            | Command::PrintConfig { common } => common,
        }
    }
}

fn load(common: &Common) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            ScenarioConfig::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed.seed = seed;
    }
    if let Some(r) = common.regime {
        cfg.regime = match r {
            RegimeArg::NoiseLimited => Regime::NoiseLimited,
            RegimeArg::InterferenceLimited => Regime::InterferenceLimited,
        };
    }
    Ok(cfg)
}

/// Runs one command and returns the text to emit.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    let cfg = load(command.common())?;
    match command {
        Command::CapacitySweep {
            axis,
            bandwidth,
            distance,
            ..
        } => commands::capacity_sweep(
            &cfg,
            &commands::CapacityArgs {
                axes: axis.clone(),
                bandwidth: *bandwidth,
                distance: *distance,
            },
        ),
        Command::Dimension {
            axis,
            proportional_reuse,
            ..
        } => commands::dimension(
            &cfg,
            &commands::DimensionArgs {
                axes: axis.clone(),
                proportional_reuse: *proportional_reuse,
            },
        ),
        Command::Pareto { grid, .. } => {
            let grid = match grid {
                Some(g) => grid::parse_values(g).map_err(|e| CliError::Usage(format!("--grid: {e}")))?,
                None => commands::default_beta_grid(),
            };
            commands::pareto(&cfg, &grid)
        }
        Command::Validate {
            which,
            n,
            rho,
            bandwidth,
            distance,
            ..
        } => {
            let mut checks = Vec::new();
            for w in which {
                let add: &[Check] = match w {
                    WhichArg::Geometry => &[Check::Geometry],
                    WhichArg::CapacityNl => &[Check::CapacityNl],
                    WhichArg::CapacityIl => &[Check::CapacityIl],
                    WhichArg::Queue => &[Check::Queue],
                    WhichArg::EndToEnd => &[Check::EndToEnd],
                    WhichArg::All => &Check::ALL,
                };
                for c in add {
                    if !checks.contains(c) {
                        checks.push(*c);
                    }
                }
            }
            commands::validate(
                &cfg,
                &commands::ValidateArgs {
                    checks,
                    n: *n,
                    rho: rho.clone(),
                    bandwidth: *bandwidth,
                    distance: *distance,
                },
            )
        }
        Command::PrintConfig { .. } => Ok(Outcome {
            body: cfg.to_toml(),
            code: 0,
        }),
    }
}

/// Full program: thread pool, command, output. Returns the exit code.
pub fn run(cli: Cli) -> u8 {
    let common = cli.command.common();
    if let Some(n) = common.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("internal error: thread pool: {e}");
            return 1;
        }
    }
    match execute(&cli.command) {
        Ok(outcome) => {
            let written = match &common.out {
                Some(path) => std::fs::write(path, &outcome.body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    use std::io::Write;
                    std::io::stdout()
                        .write_all(outcome.body.as_bytes())
                        .map_err(|e| format!("cannot write stdout: {e}"))
                }
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.code()
        }
    }
}
