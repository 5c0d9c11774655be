use rayon::prelude::*;

use super::OutageEstimate;
use crate::error::{ensure_positive, Error};
use crate::scenario::ScenarioConfig;
use crate::schemes::{sample_trial, LinkBudget, PowerAllocation, SchemeKind};
use crate::sensing::ChannelState;
use crate::streams::TrialStreams;

/// Trials per parallel work item. Counts are integers, so the reduction is
/// exact whatever the chunk-to-thread assignment.
const CHUNK: u64 = 4096;

pub fn outage_mc(
    scheme: SchemeKind,
    total_power_w: f64,
    scenario: &ScenarioConfig,
    trials: u64,
    seed: u64,
) -> Result<OutageEstimate, Error> {
    Ok(outage_mc_cells(&[(scheme, total_power_w)], scenario, trials, seed)?[0])
}

/// Estimates every (scheme, power) cell from one shared set of trial
/// realizations: trial `i` is drawn from substream `i` of `seed`, so any two
/// cells evaluated with the same seed see identical channels and sensing.
pub fn outage_mc_cells(
    cells: &[(SchemeKind, f64)],
    scenario: &ScenarioConfig,
    trials: u64,
    seed: u64,
) -> Result<Vec<OutageEstimate>, Error> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    scenario.validate()?;
    for &(_, power) in cells {
        ensure_positive("total_power_w", power)?;
    }

    let budget = LinkBudget::new(scenario);
    // Allocations depend only on the detected state; index 0 = idle, 1 = busy.
    let allocations: Vec<[PowerAllocation; 2]> = cells
        .iter()
        .map(|&(scheme, power)| {
            [ChannelState::Idle, ChannelState::Busy].map(|d| scenario.allocation.allocate(scheme, power, d))
        })
        .collect();
    let streams = TrialStreams::new(seed);
    let chunks = trials.div_ceil(CHUNK);

    let counts = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut counts = vec![0u64; cells.len()];
            let end = ((chunk + 1) * CHUNK).min(trials);
            for index in chunk * CHUNK..end {
                let trial = sample_trial(scenario, &mut streams.trial(index));
                let slot = match trial.sensing.detected {
                    ChannelState::Idle => 0,
                    ChannelState::Busy => 1,
                };
                for (count, alloc) in counts.iter_mut().zip(&allocations) {
                    if budget.allocation_outage(&alloc[slot], &trial) {
                        *count += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; cells.len()],
            |mut acc, part| {
                acc.iter_mut().zip(part).for_each(|(a, b)| *a += b);
                acc
            },
        );

    Ok(counts.into_iter().map(|k| OutageEstimate::from_counts(k, trials)).collect())
}
