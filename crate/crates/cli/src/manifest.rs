//! Fully resolved run settings, rendered in the config file format so a
//! manifest can be fed back through `--config` to reproduce a run.

use std::collections::BTreeMap;
use std::str::FromStr;

use greencell_core::{ScenarioConfig, SchemeKind};

use crate::config::{parse_list, scenario_entries};
use crate::error::CliError;
use crate::format::{format_float, format_list};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const SEED_ENV: &str = "GREENCELL_SEED";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum CommandArgs {
    Sweep {
        pmin: f64,
        pmax: f64,
        points: usize,
    },
    Point {
        scheme: SchemeKind,
        power_w: f64,
    },
    Compare {
        targets: Vec<f64>,
        pmin: f64,
        pmax: f64,
        points: usize,
    },
    Roc {
        snr: f64,
        samples: usize,
        thresholds: Vec<f64>,
    },
}

impl CommandArgs {
    pub fn name(&self) -> &'static str {
        match self {
            CommandArgs::Sweep { .. } => "sweep",
            CommandArgs::Point { .. } => "point",
            CommandArgs::Compare { .. } => "compare",
            CommandArgs::Roc { .. } => "roc",
        }
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        match self {
            CommandArgs::Sweep { pmin, pmax, points } => vec![
                ("pmin", format_float(*pmin)),
                ("pmax", format_float(*pmax)),
                ("points", points.to_string()),
            ],
            CommandArgs::Point { scheme, power_w } => {
                vec![("scheme", scheme.name().to_string()), ("power_w", format_float(*power_w))]
            }
            CommandArgs::Compare {
                targets,
                pmin,
                pmax,
                points,
            } => vec![
                ("targets", format_list(targets)),
                ("pmin", format_float(*pmin)),
                ("pmax", format_float(*pmax)),
                ("points", points.to_string()),
            ],
            CommandArgs::Roc {
                snr,
                samples,
                thresholds,
            } => vec![
                ("snr", format_float(*snr)),
                ("samples", samples.to_string()),
                ("thresholds", format_list(thresholds)),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub scenario: ScenarioConfig,
    pub seed: u64,
    pub trials: u64,
    pub args: CommandArgs,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::from("# greencell run manifest; pass back with --config to reproduce\n");
        out.push_str(&format!("run.version = {VERSION}\n"));
        out.push_str(&format!("run.command = {}\n", self.args.name()));
        out.push_str(&format!("run.seed = {}\n", self.seed));
        out.push_str(&format!("run.trials = {}\n", self.trials));
        for (key, value) in self.args.entries() {
            out.push_str(&format!("run.{key} = {value}\n"));
        }
        for (key, value) in scenario_entries(&self.scenario) {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}

/// Settings recorded under `run.` in a loaded config or manifest.
#[derive(Debug, Clone, Default)]
pub struct RunDefaults<'a> {
    run: Option<&'a BTreeMap<String, String>>,
}

impl<'a> RunDefaults<'a> {
    pub fn new(run: &'a BTreeMap<String, String>) -> Self {
        Self { run: Some(run) }
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.run.and_then(|r| r.get(key)).map(String::as_str)
    }

    /// Flag value, else the recorded `run.<key>`, else `default`.
    pub fn value<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => parse_run(key, raw),
            None => Ok(default),
        }
    }

    pub fn list(&self, flag: Option<&str>, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match flag.or_else(|| self.get(key)) {
            Some(raw) => parse_list(key, raw),
            None => Ok(default.to_vec()),
        }
    }

    /// Seed precedence: flag, recorded `run.seed`, `GREENCELL_SEED`, default.
    pub fn seed(&self, flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(raw) = self.get("seed") {
            return parse_run("seed", raw);
        }
        match env {
            Some(raw) => raw.trim().parse().map_err(|_| CliError::InvalidValue {
                key: SEED_ENV.to_string(),
                value: raw.to_string(),
            }),
            None => Ok(DEFAULT_SEED),
        }
    }
}

fn parse_run<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.trim().parse().map_err(|_| CliError::InvalidValue {
        key: format!("run.{key}"),
        value: raw.to_string(),
    })
}
