//! `key = value` scenario files.
//!
//! Blank lines and `#` comments are ignored. Frequencies are in Hz, powers
//! in W, distances in m and antenna gains in dB. Any key left out takes its
//! default from [`ScenarioConfig::default`]. Keys prefixed `run.` carry the
//! invocation settings of a previous run (see [`crate::manifest`]).

use std::collections::BTreeMap;
use std::path::Path;

use greencell_core::linkmodel::{db_to_linear, linear_to_db};
use greencell_core::{
    AllocationPolicy, LinkParams, NoiseModel, PlaneLinks, RadioBand, ScenarioConfig, SchemeKind, SensingProfile,
};

use crate::error::CliError;
use crate::format::format_float;

/// Scenario keys in manifest order.
pub const SCENARIO_KEYS: &[&str] = &[
    "cellular_carrier_hz",
    "cellular_bandwidth_hz",
    "tv_carrier_hz",
    "tv_bandwidth_hz",
    "rate_bps",
    "bs_gain_db",
    "tvs_gain_db",
    "tvs_interference_gain_db",
    "ut_gain_db",
    "bs_distance_m",
    "tvs_distance_m",
    "bs_fading_cellular",
    "bs_fading_tv",
    "tvs_fading_cellular",
    "tvs_fading_tv",
    "interference_fading",
    "tvs_power_w",
    "temperature_k",
    "p_detect",
    "p_false_alarm",
    "p_available",
    "schemes",
    "joint_idle_shares",
];

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub scenario: ScenarioConfig,
    /// `run.*` entries with the prefix stripped.
    pub run: BTreeMap<String, String>,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<LoadedConfig, CliError> {
    let mut entries: BTreeMap<String, String> = BTreeMap::new();
    let mut run = BTreeMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Parse {
                line: number + 1,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if let Some(run_key) = key.strip_prefix("run.") {
            run.insert(run_key.to_string(), value.to_string());
            continue;
        }
        if !SCENARIO_KEYS.contains(&key) {
            return Err(CliError::UnknownKey(key.to_string()));
        }
        if entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Parse {
                line: number + 1,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(LoadedConfig {
        scenario: build_scenario(&entries)?,
        run,
    })
}

struct Values<'a>(&'a BTreeMap<String, String>);

impl Values<'_> {
    fn number(&self, key: &'static str, default: f64) -> Result<f64, CliError> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => parse_number(key, v),
        }
    }

    fn positive(&self, key: &'static str, default: f64) -> Result<f64, CliError> {
        let v = self.number(key, default)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::OutOfRange { key, constraint: "be > 0" })
        }
    }

    fn non_negative(&self, key: &'static str, default: f64) -> Result<f64, CliError> {
        let v = self.number(key, default)?;
        if v >= 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::OutOfRange { key, constraint: "be >= 0" })
        }
    }

    fn probability(&self, key: &'static str, default: f64) -> Result<f64, CliError> {
        let v = self.number(key, default)?;
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(CliError::OutOfRange {
                key,
                constraint: "lie in [0,1]",
            })
        }
    }

    fn finite(&self, key: &'static str, default: f64) -> Result<f64, CliError> {
        let v = self.number(key, default)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::OutOfRange { key, constraint: "be finite" })
        }
    }
}

pub(crate) fn parse_number(key: &str, value: &str) -> Result<f64, CliError> {
    value.trim().parse::<f64>().map_err(|_| CliError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

pub(crate) fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_number(key, s))
        .collect()
}

fn build_scenario(entries: &BTreeMap<String, String>) -> Result<ScenarioConfig, CliError> {
    let defaults = ScenarioConfig::default();
    let v = Values(entries);

    let cellular_band = RadioBand::new(
        v.positive("cellular_carrier_hz", defaults.cellular_band.carrier_hz())?,
        v.positive("cellular_bandwidth_hz", defaults.cellular_band.bandwidth_hz())?,
    )?;
    let tv_band = RadioBand::new(
        v.positive("tv_carrier_hz", defaults.tv_band.carrier_hz())?,
        v.positive("tv_bandwidth_hz", defaults.tv_band.bandwidth_hz())?,
    )?;

    let default_gain_db = |link: &LinkParams| linear_to_db(link.tx_gain_linear());
    let bs_gain = db_to_linear(v.finite("bs_gain_db", default_gain_db(&defaults.bs_links.cellular))?);
    let tvs_gain = db_to_linear(v.finite("tvs_gain_db", default_gain_db(&defaults.tvs_links.cellular))?);
    let interference_gain =
        db_to_linear(v.finite("tvs_interference_gain_db", default_gain_db(&defaults.interference_link))?);
    let ut_gain = db_to_linear(v.finite(
        "ut_gain_db",
        linear_to_db(defaults.bs_links.cellular.rx_gain_linear()),
    )?);

    let bs_distance = v.positive("bs_distance_m", defaults.bs_links.cellular.distance_m())?;
    let tvs_distance = v.positive("tvs_distance_m", defaults.tvs_links.cellular.distance_m())?;

    let fading = |key: &'static str, link: &LinkParams| v.positive(key, link.fading_mean_sq());
    let bs_links = PlaneLinks {
        cellular: LinkParams::new(bs_distance, bs_gain, ut_gain, fading("bs_fading_cellular", &defaults.bs_links.cellular)?)?,
        tv: LinkParams::new(bs_distance, bs_gain, ut_gain, fading("bs_fading_tv", &defaults.bs_links.tv)?)?,
    };
    let tvs_links = PlaneLinks {
        cellular: LinkParams::new(tvs_distance, tvs_gain, ut_gain, fading("tvs_fading_cellular", &defaults.tvs_links.cellular)?)?,
        tv: LinkParams::new(tvs_distance, tvs_gain, ut_gain, fading("tvs_fading_tv", &defaults.tvs_links.tv)?)?,
    };
    let interference_link = LinkParams::new(
        tvs_distance,
        interference_gain,
        ut_gain,
        fading("interference_fading", &defaults.interference_link)?,
    )?;

    let sensing = SensingProfile::new(
        v.probability("p_detect", defaults.sensing.p_detect())?,
        v.probability("p_false_alarm", defaults.sensing.p_false_alarm())?,
        v.probability("p_available", defaults.sensing.p_available())?,
    )?;

    let schemes = match entries.get("schemes") {
        None => defaults.schemes.clone(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<SchemeKind>())
            .collect::<Result<Vec<_>, _>>()?,
    };
    if schemes.is_empty() {
        return Err(CliError::OutOfRange {
            key: "schemes",
            constraint: "name at least one scheme",
        });
    }

    let allocation = match entries.get("joint_idle_shares") {
        None => defaults.allocation,
        Some(list) => {
            let shares = parse_list("joint_idle_shares", list)?;
            let shares: [f64; 4] = shares.try_into().map_err(|_| CliError::OutOfRange {
                key: "joint_idle_shares",
                constraint: "have exactly four entries",
            })?;
            AllocationPolicy {
                joint_idle_shares: shares,
            }
        }
    };

    let scenario = ScenarioConfig {
        cellular_band,
        tv_band,
        bs_links,
        tvs_links,
        interference_link,
        tvs_power_w: v.non_negative("tvs_power_w", defaults.tvs_power_w)?,
        noise: NoiseModel::new(v.positive("temperature_k", defaults.noise.temperature_k())?)?,
        sensing,
        rate_bps: v.positive("rate_bps", defaults.rate_bps)?,
        schemes,
        allocation,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Every scenario key with its resolved value, in [`SCENARIO_KEYS`] order.
pub fn scenario_entries(s: &ScenarioConfig) -> Vec<(&'static str, String)> {
    let f = format_float;
    let db = |x: f64| format_float(linear_to_db(x));
    let schemes = s.schemes.iter().map(|k| k.name()).collect::<Vec<_>>().join(",");
    let shares = s
        .allocation
        .joint_idle_shares
        .iter()
        .map(|&x| format_float(x))
        .collect::<Vec<_>>()
        .join(",");
    vec![
        ("cellular_carrier_hz", f(s.cellular_band.carrier_hz())),
        ("cellular_bandwidth_hz", f(s.cellular_band.bandwidth_hz())),
        ("tv_carrier_hz", f(s.tv_band.carrier_hz())),
        ("tv_bandwidth_hz", f(s.tv_band.bandwidth_hz())),
        ("rate_bps", f(s.rate_bps)),
        ("bs_gain_db", db(s.bs_links.cellular.tx_gain_linear())),
        ("tvs_gain_db", db(s.tvs_links.cellular.tx_gain_linear())),
        ("tvs_interference_gain_db", db(s.interference_link.tx_gain_linear())),
        ("ut_gain_db", db(s.bs_links.cellular.rx_gain_linear())),
        ("bs_distance_m", f(s.bs_links.cellular.distance_m())),
        ("tvs_distance_m", f(s.tvs_links.cellular.distance_m())),
        ("bs_fading_cellular", f(s.bs_links.cellular.fading_mean_sq())),
        ("bs_fading_tv", f(s.bs_links.tv.fading_mean_sq())),
        ("tvs_fading_cellular", f(s.tvs_links.cellular.fading_mean_sq())),
        ("tvs_fading_tv", f(s.tvs_links.tv.fading_mean_sq())),
        ("interference_fading", f(s.interference_link.fading_mean_sq())),
        ("tvs_power_w", f(s.tvs_power_w)),
        ("temperature_k", f(s.noise.temperature_k())),
        ("p_detect", f(s.sensing.p_detect())),
        ("p_false_alarm", f(s.sensing.p_false_alarm())),
        ("p_available", f(s.sensing.p_available())),
        ("schemes", schemes),
        ("joint_idle_shares", shares),
    ]
}
