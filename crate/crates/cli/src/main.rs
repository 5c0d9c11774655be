use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use greencell_cli::manifest::{DEFAULT_TRIALS, SEED_ENV};
use greencell_cli::{execute, load_config, CliError, CommandArgs, LoadedConfig, RunDefaults, RunManifest};
use greencell_core::{ScenarioConfig, SchemeKind};

#[derive(Parser)]
#[command(name = "greencell", version, about = "Energy efficiency vs outage for cognitive/cooperative downlinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (`key = value` lines); a previous run's manifest also works.
    #[arg(long)]
    config: Option<PathBuf>,
    /// RNG seed [default: GREENCELL_SEED, else 1].
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per cell [default: 100000].
    #[arg(long)]
    trials: Option<u64>,
    /// Write CSV here and the manifest to `<out>.manifest` (default: CSV to
    /// stdout, manifest to stderr).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Grid {
    /// Lowest total power in W.
    #[arg(long)]
    pmin: Option<f64>,
    /// Highest total power in W.
    #[arg(long)]
    pmax: Option<f64>,
    /// Number of log-spaced powers.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Outage (Monte Carlo and analytic) and efficiency over a power grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// [default: 0.01 to 10 W, 21 points]
        #[command(flatten)]
        grid: Grid,
    },
    /// A single (scheme, power) cell.
    Point {
        #[command(flatten)]
        common: Common,
        /// direct, pure_cognition, pure_cooperation or joint [default: joint].
        #[arg(long)]
        scheme: Option<SchemeKind>,
        /// Total power in W [default: 1].
        #[arg(long)]
        power: Option<f64>,
    },
    /// Efficiency of each scheme at target outage levels (analytic).
    Compare {
        #[command(flatten)]
        common: Common,
        /// Comma-separated outage targets [default: 1e-3,1e-2,1e-1].
        #[arg(long)]
        targets: Option<String>,
        /// [default: 1e-6 to 1e3 W, 181 points]
        #[command(flatten)]
        grid: Grid,
    },
    /// Empirical energy-detector ROC.
    Roc {
        #[command(flatten)]
        common: Common,
        /// Per-sample SNR, linear [default: 1].
        #[arg(long)]
        snr: Option<f64>,
        /// Samples per decision [default: 20].
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated increasing thresholds [default: 0,2,...,80].
        #[arg(long)]
        thresholds: Option<String>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Sweep { common, .. }
            | Command::Point { common, .. }
            | Command::Compare { common, .. }
            | Command::Roc { common, .. } => common,
        }
    }
}

fn resolve(command: &Command) -> Result<RunManifest, CliError> {
    let common = command.common();
    let loaded = match &common.config {
        Some(path) => load_config(path)?,
        None => LoadedConfig {
            scenario: ScenarioConfig::default(),
            run: Default::default(),
        },
    };
    let run = RunDefaults::new(&loaded.run);
    let env_seed = std::env::var(SEED_ENV).ok();
    let seed = run.seed(common.seed, env_seed.as_deref())?;
    let trials = run.value(common.trials, "trials", DEFAULT_TRIALS)?;

    let grid = |g: &Grid, pmin: f64, pmax: f64, points: usize| -> Result<(f64, f64, usize), CliError> {
        Ok((
            run.value(g.pmin, "pmin", pmin)?,
            run.value(g.pmax, "pmax", pmax)?,
            run.value(g.points, "points", points)?,
        ))
    };
    let args = match command {
        Command::Sweep { grid: g, .. } => {
            let (pmin, pmax, points) = grid(g, 0.01, 10.0, 21)?;
            CommandArgs::Sweep { pmin, pmax, points }
        }
        Command::Point { scheme, power, .. } => CommandArgs::Point {
            scheme: run.value(*scheme, "scheme", SchemeKind::JointCognitionCooperation)?,
            power_w: run.value(*power, "power_w", 1.0)?,
        },
        Command::Compare { targets, grid: g, .. } => {
            let (pmin, pmax, points) = grid(g, 1e-6, 1e3, 181)?;
            CommandArgs::Compare {
                targets: run.list(targets.as_deref(), "targets", &[1e-3, 1e-2, 1e-1])?,
                pmin,
                pmax,
                points,
            }
        }
        Command::Roc {
            snr,
            samples,
            thresholds,
            ..
        } => {
            let default_grid: Vec<f64> = (0..=40).map(|i| 2.0 * i as f64).collect();
            CommandArgs::Roc {
                snr: run.value(*snr, "snr", 1.0)?,
                samples: run.value(*samples, "samples", 20)?,
                thresholds: run.list(thresholds.as_deref(), "thresholds", &default_grid)?,
            }
        }
    };
    if trials == 0 {
        return Err(CliError::OutOfRange {
            key: "trials",
            constraint: "be at least 1",
        });
    }
    Ok(RunManifest {
        scenario: loaded.scenario,
        seed,
        trials,
        args,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let manifest = resolve(&cli.command)?;
    let common = cli.command.common();
    let output = match common.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| greencell_core::Error::InvalidInput(format!("thread pool: {e}")))?
            .install(|| execute(&manifest))?,
        None => execute(&manifest)?,
    };
    if let Some(report) = &output.report {
        print!("{report}");
    }
    match &common.out {
        Some(path) => {
            write(path, &output.csv)?;
            let mut manifest_path = path.clone().into_os_string();
            manifest_path.push(".manifest");
            write(Path::new(&manifest_path), &manifest.render())?;
        }
        None => {
            print!("{}", output.csv);
            eprint!("{}", manifest.render());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("greencell: error: {e}");
            ExitCode::from(2)
        }
    }
}
