//! Subcommand bodies. Each returns its CSV text; callers decide where it goes.

use greencell_core::evaluate::log_spaced_grid;
use greencell_core::sensing::roc_curve;
use greencell_core::{
    analytic_curves, efficiency_at_outage, tradeoff_sweep, Error, ScenarioConfig, SchemeKind, TradeoffCurve,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::format::format_float;
use crate::manifest::{CommandArgs, RunManifest};

pub const SWEEP_HEADER: &str =
    "scheme,power_w,outage_mc,outage_stderr,outage_analytic,efficiency_bits_per_joule,mc_reliable";
pub const COMPARE_HEADER: &str = "target_outage,scheme,efficiency_bits_per_joule,gain_vs_direct";
pub const ROC_HEADER: &str = "threshold,p_false_alarm,p_detect";
pub const UNREACHABLE: &str = "unreachable";

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub csv: String,
    /// Human-readable summary, if the command produces one.
    pub report: Option<String>,
}

pub fn execute(manifest: &RunManifest) -> Result<CommandOutput, CliError> {
    let scenario = &manifest.scenario;
    match &manifest.args {
        CommandArgs::Sweep { pmin, pmax, points } => {
            let grid = log_spaced_grid(*pmin, *pmax, *points)?;
            Ok(CommandOutput {
                csv: cmd_sweep(scenario, &grid, manifest.trials, manifest.seed)?,
                report: None,
            })
        }
        CommandArgs::Point { scheme, power_w } => {
            let (csv, report) = cmd_point(scenario, *scheme, *power_w, manifest.trials, manifest.seed)?;
            Ok(CommandOutput {
                csv,
                report: Some(report),
            })
        }
        CommandArgs::Compare {
            targets,
            pmin,
            pmax,
            points,
        } => {
            let grid = log_spaced_grid(*pmin, *pmax, *points)?;
            Ok(CommandOutput {
                csv: cmd_compare(scenario, targets, &grid)?,
                report: None,
            })
        }
        CommandArgs::Roc {
            snr,
            samples,
            thresholds,
        } => Ok(CommandOutput {
            csv: cmd_roc(*snr, *samples, thresholds, manifest.trials, manifest.seed)?,
            report: None,
        }),
    }
}

fn trials_usize(trials: u64) -> Result<usize, CliError> {
    usize::try_from(trials).map_err(|_| CliError::OutOfRange {
        key: "trials",
        constraint: "fit in memory",
    })
}

pub fn sweep_csv(curves: &[TradeoffCurve]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for curve in curves {
        for p in &curve.points {
            let (mc, stderr) = p.monte_carlo.map_or((f64::NAN, f64::NAN), |m| (m.mean, m.stderr));
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                curve.scheme.name(),
                format_float(p.total_power_w),
                format_float(mc),
                format_float(stderr),
                format_float(p.analytic.mean),
                format_float(p.energy_efficiency_bits_per_joule),
                p.mc_reliable
            ));
        }
    }
    out
}

pub fn cmd_sweep(scenario: &ScenarioConfig, grid: &[f64], trials: u64, seed: u64) -> Result<String, CliError> {
    Ok(sweep_csv(&tradeoff_sweep(scenario, grid, trials, seed)?))
}

/// One (scheme, power) cell: CSV with the sweep header, and a summary.
pub fn cmd_point(
    scenario: &ScenarioConfig,
    scheme: SchemeKind,
    power_w: f64,
    trials: u64,
    seed: u64,
) -> Result<(String, String), CliError> {
    let single = ScenarioConfig {
        schemes: vec![scheme],
        ..scenario.clone()
    };
    let curves = tradeoff_sweep(&single, &[power_w], trials, seed)?;
    let point = curves[0].points[0];
    let mc = point.monte_carlo.expect("sweep runs Monte Carlo");
    let (lo, hi) = mc.confidence_interval(1.96);
    let mut report = String::new();
    report.push_str(&format!("scheme:                        {scheme}\n"));
    report.push_str(&format!("total power:                   {power_w} W\n"));
    report.push_str(&format!(
        "outage (Monte Carlo):          {:.6e} +/- {:.2e}  [95% CI {:.6e}, {:.6e}], {} of {} trials\n",
        mc.mean, mc.stderr, lo, hi, mc.outages, mc.trials
    ));
    report.push_str(&format!("outage (analytic):             {:.6e}\n", point.analytic.mean));
    report.push_str(&format!(
        "energy efficiency:             {:.6e} bit/J\n",
        point.energy_efficiency_bits_per_joule
    ));
    report.push_str(&format!(
        "missed-detection probability:  {:.6e}\n",
        scenario.sensing.missed_detection_probability()
    ));
    if !point.mc_reliable {
        report.push_str("note: fewer than 10 expected outages; Monte Carlo estimate is not reliable\n");
    }
    Ok((sweep_csv(&curves), report))
}

/// Energy efficiency of each scheme at each target outage, read off the
/// analytic curves over `grid`, with the gain relative to direct transmission.
pub fn cmd_compare(scenario: &ScenarioConfig, targets: &[f64], grid: &[f64]) -> Result<String, CliError> {
    if targets.is_empty() {
        return Err(CliError::OutOfRange {
            key: "targets",
            constraint: "name at least one outage target",
        });
    }
    if let Some(&bad) = targets.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::InvalidParameter {
            name: "target_outage",
            constraint: "in (0, 1)",
            value: bad,
        }
        .into());
    }
    let mut schemes = scenario.ordered_schemes();
    if !schemes.contains(&SchemeKind::Direct) {
        schemes.insert(0, SchemeKind::Direct);
    }
    let with_direct = ScenarioConfig {
        schemes,
        ..scenario.clone()
    };
    let curves = analytic_curves(&with_direct, grid)?;
    let direct = curves
        .iter()
        .find(|c| c.scheme == SchemeKind::Direct)
        .expect("direct curve was added");

    let reachable = |curve: &TradeoffCurve, target: f64| match efficiency_at_outage(curve, target) {
        Ok(eta) => Ok(Some(eta)),
        Err(Error::TargetOutOfRange { .. }) => Ok(None),
        Err(e) => Err(e),
    };

    let mut out = format!("{COMPARE_HEADER}\n");
    for &target in targets {
        let reference = reachable(direct, target)?;
        for curve in curves.iter().filter(|c| scenario.schemes.contains(&c.scheme)) {
            let eta = reachable(curve, target)?;
            let (eta_text, gain_text) = match (eta, reference) {
                (Some(e), Some(r)) => (format_float(e), format_float(e / r)),
                (Some(e), None) => (format_float(e), UNREACHABLE.to_string()),
                (None, _) => (UNREACHABLE.to_string(), UNREACHABLE.to_string()),
            };
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_float(target),
                curve.scheme.name(),
                eta_text,
                gain_text
            ));
        }
    }
    Ok(out)
}

pub fn cmd_roc(snr: f64, samples: usize, thresholds: &[f64], trials: u64, seed: u64) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curve = roc_curve(snr, samples, thresholds, trials_usize(trials)?, &mut rng)?;
    let mut out = format!("{ROC_HEADER}\n");
    for p in curve {
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(p.threshold),
            format_float(p.p_false_alarm),
            format_float(p.p_detect)
        ));
    }
    Ok(out)
}
