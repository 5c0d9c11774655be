use super::{energy_efficiency, outage_analytic, outage_mc_cells, OutageEstimate, RARE_EVENT_COUNT};
use crate::error::{ensure_positive, Error};
use crate::scenario::ScenarioConfig;
use crate::schemes::SchemeKind;

/// One (power, outage, efficiency) point of a scheme's tradeoff curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub total_power_w: f64,
    pub analytic: OutageEstimate,
    pub monte_carlo: Option<OutageEstimate>,
    pub energy_efficiency_bits_per_joule: f64,
    /// False when the analytic outage implies fewer than ten expected events
    /// over the Monte Carlo trials (or no Monte Carlo was run).
    pub mc_reliable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffCurve {
    pub scheme: SchemeKind,
    /// Ordered by increasing power.
    pub points: Vec<TradeoffPoint>,
}

/// `points` logarithmically spaced values from `min` to `max` inclusive.
pub fn log_spaced_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>, Error> {
    ensure_positive("grid minimum", min)?;
    ensure_positive("grid maximum", max)?;
    match points {
        0 => Err(Error::InvalidInput("power grid needs at least one point".into())),
        1 => Ok(vec![min]),
        _ if min >= max => Err(Error::InvalidInput(format!(
            "power grid minimum {min} must be below maximum {max}"
        ))),
        n => {
            let (lo, hi) = (min.ln(), max.ln());
            let step = (hi - lo) / (n - 1) as f64;
            let mut grid: Vec<f64> = (0..n).map(|i| (lo + step * i as f64).exp()).collect();
            grid[0] = min;
            grid[n - 1] = max;
            Ok(grid)
        }
    }
}

/// 21 points from 10 mW to 10 W.
pub fn default_power_grid() -> Vec<f64> {
    log_spaced_grid(0.01, 10.0, 21).expect("static grid is valid")
}

fn validate_grid(grid: &[f64]) -> Result<(), Error> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("power grid is empty".into()));
    }
    for &p in grid {
        ensure_positive("total_power_w", p)?;
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("power grid must be strictly increasing".into()));
    }
    Ok(())
}

fn analytic_points(scheme: SchemeKind, scenario: &ScenarioConfig, grid: &[f64]) -> Result<Vec<TradeoffPoint>, Error> {
    grid.iter()
        .map(|&p| {
            Ok(TradeoffPoint {
                total_power_w: p,
                analytic: outage_analytic(scheme, p, scenario)?,
                monte_carlo: None,
                energy_efficiency_bits_per_joule: energy_efficiency(scenario.rate_bps, p)?,
                mc_reliable: false,
            })
        })
        .collect()
}

/// Analytic-only curves for every configured scheme.
pub fn analytic_curves(scenario: &ScenarioConfig, grid: &[f64]) -> Result<Vec<TradeoffCurve>, Error> {
    validate_grid(grid)?;
    scenario.validate()?;
    scenario
        .ordered_schemes()
        .into_iter()
        .map(|scheme| {
            Ok(TradeoffCurve {
                scheme,
                points: analytic_points(scheme, scenario, grid)?,
            })
        })
        .collect()
}

/// Analytic and Monte Carlo curves for every configured scheme. All cells
/// share one set of trial realizations.
pub fn tradeoff_sweep(
    scenario: &ScenarioConfig,
    grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<TradeoffCurve>, Error> {
    let mut curves = analytic_curves(scenario, grid)?;
    let cells: Vec<(SchemeKind, f64)> = curves
        .iter()
        .flat_map(|c| grid.iter().map(move |&p| (c.scheme, p)))
        .collect();
    let estimates = outage_mc_cells(&cells, scenario, trials, seed)?;
    let floor = RARE_EVENT_COUNT / trials as f64;
    for (point, mc) in curves.iter_mut().flat_map(|c| c.points.iter_mut()).zip(estimates) {
        point.monte_carlo = Some(mc);
        point.mc_reliable = point.analytic.mean >= floor;
    }
    Ok(curves)
}

/// Energy efficiency at a target outage, log-log interpolated along the
/// curve's analytic outage values. No extrapolation.
pub fn efficiency_at_outage(curve: &TradeoffCurve, target_outage: f64) -> Result<f64, Error> {
    let usable: Vec<(f64, f64)> = curve
        .points
        .iter()
        .map(|p| (p.analytic.mean, p.energy_efficiency_bits_per_joule))
        .filter(|&(o, _)| o > 0.0)
        .collect();
    let min = usable.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max = usable.iter().map(|p| p.0).fold(0.0, f64::max);
    let out_of_range = || Error::TargetOutOfRange {
        target: target_outage,
        min,
        max,
    };
    if target_outage.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || usable.is_empty() {
        return Err(out_of_range());
    }
    // Walk from low power (high outage) so the first bracket found is the
    // most efficient operating point meeting the target.
    if let Some(&(_, eta)) = usable.iter().find(|p| p.0 == target_outage) {
        return Ok(eta);
    }
    for w in usable.windows(2) {
        let ((o_hi, eta_hi), (o_lo, eta_lo)) = (w[0], w[1]);
        if o_lo < target_outage && target_outage < o_hi {
            let t = (target_outage.ln() - o_hi.ln()) / (o_lo.ln() - o_hi.ln());
            return Ok((eta_hi.ln() + t * (eta_lo.ln() - eta_hi.ln())).exp());
        }
    }
    Err(out_of_range())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::SensingProfile;

    #[test]
    fn grid_shape() {
        let g = default_power_grid();
        assert_eq!(g.len(), 21);
        assert_eq!((g[0], g[20]), (0.01, 10.0));
        assert!((g[10] - 0.01f64.sqrt() * 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(log_spaced_grid(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(log_spaced_grid(2.0, 1.0, 3).is_err());
        assert!(log_spaced_grid(0.0, 1.0, 3).is_err());
        assert!(log_spaced_grid(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn single_point_sweep() {
        let scenario = ScenarioConfig::default();
        let curves = tradeoff_sweep(&scenario, &[1.0], 20_000, 5).unwrap();
        assert_eq!(curves.len(), 4);
        let direct = &curves[0].points[0];
        assert_eq!(curves[0].scheme, SchemeKind::Direct);
        assert_eq!(direct.energy_efficiency_bits_per_joule, 3e7);
        assert!((direct.analytic.mean - 3.084e-3).abs() < 1e-6);
        assert!(direct.monte_carlo.is_some());
    }

    #[test]
    fn efficiency_ratio_between_grid_points() {
        let scenario = ScenarioConfig::default();
        let curves = analytic_curves(&scenario, &[0.5, 1.0]).unwrap();
        for c in curves {
            assert_eq!(
                c.points[0].energy_efficiency_bits_per_joule / c.points[1].energy_efficiency_bits_per_joule,
                2.0
            );
        }
    }

    #[test]
    fn curves_trade_efficiency_for_outage() {
        let curves = analytic_curves(&ScenarioConfig::default(), &default_power_grid()).unwrap();
        for c in &curves {
            for w in c.points.windows(2) {
                assert!(w[1].energy_efficiency_bits_per_joule < w[0].energy_efficiency_bits_per_joule);
                assert!(w[1].analytic.mean <= w[0].analytic.mean, "{}", c.scheme);
            }
        }
    }

    #[test]
    fn joint_beats_both_pure_schemes() {
        let curves = analytic_curves(&ScenarioConfig::default(), &default_power_grid()).unwrap();
        let by = |s| curves.iter().find(|c| c.scheme == s).unwrap();
        let joint = by(SchemeKind::JointCognitionCooperation);
        let coop = by(SchemeKind::PureCooperation);
        let cog = by(SchemeKind::PureCognition);
        for i in 0..joint.points.len() {
            let j = joint.points[i].analytic.mean;
            assert!(j <= coop.points[i].analytic.mean);
            assert!(j <= cog.points[i].analytic.mean);
        }
    }

    #[test]
    fn interpolation_identity_and_range() {
        let curves = analytic_curves(&ScenarioConfig::default(), &default_power_grid()).unwrap();
        let direct = &curves[0];
        let p = direct.points[7];
        assert_eq!(efficiency_at_outage(direct, p.analytic.mean).unwrap(), p.energy_efficiency_bits_per_joule);
        assert!(matches!(efficiency_at_outage(direct, 0.9), Err(Error::TargetOutOfRange { .. })));
        assert!(matches!(efficiency_at_outage(direct, 1e-9), Err(Error::TargetOutOfRange { .. })));

        let mut last = 0.0;
        for target in [1e-3, 2e-3, 5e-3, 1e-2, 5e-2, 0.1, 0.2] {
            let eta = efficiency_at_outage(direct, target).unwrap();
            assert!(eta >= last);
            last = eta;
        }
    }

    #[test]
    fn joint_more_efficient_than_direct_at_one_percent() {
        let curves = analytic_curves(&ScenarioConfig::default(), &default_power_grid()).unwrap();
        let direct = efficiency_at_outage(&curves[0], 1e-2).unwrap();
        let joint = efficiency_at_outage(&curves[3], 1e-2).unwrap();
        assert!(joint > direct);
    }

    #[test]
    fn reliability_flag() {
        let scenario = ScenarioConfig::default().with_sensing(SensingProfile::default());
        let curves = tradeoff_sweep(&scenario, &[0.01, 10.0], 10_000, 1).unwrap();
        // Direct at 10 mW is ~0.27; joint at 10 W is far below 1e-3.
        assert!(curves[0].points[0].mc_reliable);
        assert!(!curves[3].points[1].mc_reliable);
    }

    #[test]
    fn rejects_bad_grids() {
        let s = ScenarioConfig::default();
        assert!(analytic_curves(&s, &[]).is_err());
        assert!(analytic_curves(&s, &[1.0, 1.0]).is_err());
        assert!(analytic_curves(&s, &[-1.0]).is_err());
    }
}
