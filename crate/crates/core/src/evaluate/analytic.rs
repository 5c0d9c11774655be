use super::distribution::{exp_sum_cdf, interference_averaged_cdf};
use super::OutageEstimate;
use crate::error::{ensure_positive, Error};
use crate::scenario::ScenarioConfig;
use crate::schemes::{LinkBudget, Plane, PowerAllocation, SchemeKind, Transmitter};
use crate::sensing::{joint_outcome_probabilities, ChannelState};

/// Exact outage probability by total probability over the sensing outcomes.
///
/// Within an outcome the planes fade independently, so a scheme using both
/// planes fails with probability F_cell · F_tv. Branch signal powers are
/// exponential (sum of two for Alamouti); the missed-detection TV plane is
/// averaged over the interference fading by quadrature.
pub fn outage_analytic(
    scheme: SchemeKind,
    total_power_w: f64,
    scenario: &ScenarioConfig,
) -> Result<OutageEstimate, Error> {
    ensure_positive("total_power_w", total_power_w)?;
    scenario.validate()?;
    let budget = LinkBudget::new(scenario);
    let policy = &scenario.allocation;

    if !scheme.uses_cognition() {
        let alloc = policy.allocate(scheme, total_power_w, ChannelState::Busy);
        return Ok(OutageEstimate::analytic(plane_outage(scenario, &budget, &alloc, Plane::Cellular, false)?));
    }

    let mut total = 0.0;
    for (outcome, probability) in joint_outcome_probabilities(&scenario.sensing).iter() {
        if probability == 0.0 {
            continue;
        }
        let alloc = policy.allocate(scheme, total_power_w, outcome.detected);
        let mut outage = plane_outage(scenario, &budget, &alloc, Plane::Cellular, false)?;
        if alloc.is_active(Plane::Tv) {
            outage *= plane_outage(scenario, &budget, &alloc, Plane::Tv, outcome.is_missed_detection())?;
        }
        total += probability * outage;
    }
    Ok(OutageEstimate::analytic(total.clamp(0.0, 1.0)))
}

fn plane_outage(
    scenario: &ScenarioConfig,
    budget: &LinkBudget,
    alloc: &PowerAllocation,
    plane: Plane,
    interfered: bool,
) -> Result<f64, Error> {
    let means = Transmitter::ALL.map(|tx| {
        alloc.share(tx, plane) * budget.path_gain(tx, plane) * scenario.link(tx, plane).fading_mean_sq()
    });
    let threshold = scenario.sinr_threshold(plane);
    let noise = budget.noise_w(plane);
    if interfered {
        let interference_mean = budget.interference_scale_w() * scenario.interference_link.fading_mean_sq();
        Ok(interference_averaged_cdf(&means, threshold, noise, interference_mean)?.value)
    } else {
        Ok(exp_sum_cdf(&means, threshold * noise))
    }
}
