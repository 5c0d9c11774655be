//! Spectrum-sensing statistics.
//!
//! The outage pipeline consumes sensing quality as the three scalars
//! (P_d, P_f, P_a). The energy detector below is a standalone tool for
//! producing ROC curves; it is not wired into the outage evaluation.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{ensure_probability, Error};

/// Occupancy of the TV channel, either the true state or the sensed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelState {
    Idle,
    Busy,
}

impl fmt::Display for ChannelState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelState::Idle => "idle",
            ChannelState::Busy => "busy",
        })
    }
}

/// Detection, false-alarm and availability probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingProfile {
    p_detect: f64,
    p_false_alarm: f64,
    p_available: f64,
}

impl SensingProfile {
    pub fn new(p_detect: f64, p_false_alarm: f64, p_available: f64) -> Result<Self, Error> {
        Ok(Self {
            p_detect: ensure_probability("p_detect", p_detect)?,
            p_false_alarm: ensure_probability("p_false_alarm", p_false_alarm)?,
            p_available: ensure_probability("p_available", p_available)?,
        })
    }

    pub fn p_detect(&self) -> f64 {
        self.p_detect
    }

    pub fn p_false_alarm(&self) -> f64 {
        self.p_false_alarm
    }

    pub fn p_available(&self) -> f64 {
        self.p_available
    }

    /// Probability that the channel is occupied yet sensed idle.
    pub fn missed_detection_probability(&self) -> f64 {
        (1.0 - self.p_available) * (1.0 - self.p_detect)
    }
}

impl Default for SensingProfile {
    fn default() -> Self {
        Self {
            p_detect: 0.99,
            p_false_alarm: 0.01,
            p_available: 0.8,
        }
    }
}

/// True and sensed channel state for one transmission attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SensingRealization {
    pub actual: ChannelState,
    pub detected: ChannelState,
}

impl SensingRealization {
    pub const fn new(actual: ChannelState, detected: ChannelState) -> Self {
        Self { actual, detected }
    }

    pub fn is_missed_detection(&self) -> bool {
        self.actual == ChannelState::Busy && self.detected == ChannelState::Idle
    }
}

/// Joint distribution of (actual, detected).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOutcomes {
    pub idle_idle: f64,
    pub idle_busy: f64,
    pub busy_idle: f64,
    pub busy_busy: f64,
}

impl JointOutcomes {
    pub fn probability(&self, outcome: SensingRealization) -> f64 {
        use ChannelState::*;
        match (outcome.actual, outcome.detected) {
            (Idle, Idle) => self.idle_idle,
            (Idle, Busy) => self.idle_busy,
            (Busy, Idle) => self.busy_idle,
            (Busy, Busy) => self.busy_busy,
        }
    }

    pub fn detected_idle(&self) -> f64 {
        self.idle_idle + self.busy_idle
    }

    pub fn total(&self) -> f64 {
        self.idle_idle + self.idle_busy + self.busy_idle + self.busy_busy
    }

    pub fn iter(&self) -> impl Iterator<Item = (SensingRealization, f64)> + '_ {
        ALL_OUTCOMES.iter().map(move |&o| (o, self.probability(o)))
    }
}

pub const ALL_OUTCOMES: [SensingRealization; 4] = [
    SensingRealization::new(ChannelState::Idle, ChannelState::Idle),
    SensingRealization::new(ChannelState::Idle, ChannelState::Busy),
    SensingRealization::new(ChannelState::Busy, ChannelState::Idle),
    SensingRealization::new(ChannelState::Busy, ChannelState::Busy),
];

pub fn joint_outcome_probabilities(profile: &SensingProfile) -> JointOutcomes {
    let pa = profile.p_available;
    JointOutcomes {
        idle_idle: pa * (1.0 - profile.p_false_alarm),
        idle_busy: pa * profile.p_false_alarm,
        busy_idle: (1.0 - pa) * (1.0 - profile.p_detect),
        busy_busy: (1.0 - pa) * profile.p_detect,
    }
}

/// Draws one (actual, detected) pair. Always consumes exactly two uniforms.
pub fn sample_outcome<R: Rng + ?Sized>(profile: &SensingProfile, rng: &mut R) -> SensingRealization {
    let occupancy: f64 = rng.random();
    let decision: f64 = rng.random();
    let actual = if occupancy < profile.p_available {
        ChannelState::Idle
    } else {
        ChannelState::Busy
    };
    let says_busy = match actual {
        ChannelState::Idle => decision < profile.p_false_alarm,
        ChannelState::Busy => decision < profile.p_detect,
    };
    let detected = if says_busy {
        ChannelState::Busy
    } else {
        ChannelState::Idle
    };
    SensingRealization { actual, detected }
}

/// Accumulated energy compared against a decision threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSample {
    pub statistic: f64,
    pub threshold: f64,
}

impl DetectorSample {
    /// Energy at or above the threshold declares the channel occupied.
    pub fn decide(&self) -> ChannelState {
        if self.statistic >= self.threshold {
            ChannelState::Busy
        } else {
            ChannelState::Idle
        }
    }
}

/// Empirical detector operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionRates {
    pub p_detect: f64,
    pub p_false_alarm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub p_false_alarm: f64,
    pub p_detect: f64,
}

/// Sum of `num_samples` squared unit-variance Gaussian observations with a
/// constant amplitude `sqrt(snr)` added (zero for the noise-only hypothesis).
fn accumulated_energy<R: Rng + ?Sized>(amplitude: f64, num_samples: usize, rng: &mut R) -> f64 {
    (0..num_samples)
        .map(|_| {
            let noise: f64 = rng.sample(StandardNormal);
            let y = amplitude + noise;
            y * y
        })
        .sum()
}

/// Noise-only and signal-present statistics, `trials` of each.
fn simulate_statistics<R: Rng + ?Sized>(
    snr: f64,
    num_samples: usize,
    trials: usize,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let amplitude = snr.sqrt();
    let mut noise_only = Vec::with_capacity(trials);
    let mut signal = Vec::with_capacity(trials);
    for _ in 0..trials {
        noise_only.push(accumulated_energy(0.0, num_samples, rng));
        signal.push(accumulated_energy(amplitude, num_samples, rng));
    }
    (noise_only, signal)
}

fn exceedance(stats: &[f64], threshold: f64) -> f64 {
    let hits = stats
        .iter()
        .filter(|&&s| DetectorSample { statistic: s, threshold }.decide() == ChannelState::Busy)
        .count();
    hits as f64 / stats.len() as f64
}

fn validate_detector(snr: f64, num_samples: usize, trials: usize) -> Result<(), Error> {
    if !(snr >= 0.0 && snr.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "snr",
            constraint: "finite and >= 0",
            value: snr,
        });
    }
    if num_samples == 0 {
        return Err(Error::InvalidInput("num_samples must be at least 1".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    Ok(())
}

fn validate_threshold(threshold: f64) -> Result<(), Error> {
    // +inf is a legitimate "never declare busy" threshold.
    if threshold >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "threshold",
            constraint: ">= 0",
            value: threshold,
        })
    }
}

pub fn energy_detect<R: Rng + ?Sized>(
    snr: f64,
    num_samples: usize,
    threshold: f64,
    trials: usize,
    rng: &mut R,
) -> Result<DetectionRates, Error> {
    validate_detector(snr, num_samples, trials)?;
    validate_threshold(threshold)?;
    let (noise_only, signal) = simulate_statistics(snr, num_samples, trials, rng);
    Ok(DetectionRates {
        p_detect: exceedance(&signal, threshold),
        p_false_alarm: exceedance(&noise_only, threshold),
    })
}

/// Empirical ROC. Every threshold is evaluated on the same simulated
/// statistics, so both columns are exactly non-increasing along the grid.
pub fn roc_curve<R: Rng + ?Sized>(
    snr: f64,
    num_samples: usize,
    threshold_grid: &[f64],
    trials: usize,
    rng: &mut R,
) -> Result<Vec<RocPoint>, Error> {
    validate_detector(snr, num_samples, trials)?;
    if threshold_grid.is_empty() {
        return Err(Error::InvalidInput("threshold grid is empty".into()));
    }
    for &t in threshold_grid {
        validate_threshold(t)?;
    }
    if threshold_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("threshold grid must be strictly increasing".into()));
    }
    let (noise_only, signal) = simulate_statistics(snr, num_samples, trials, rng);
    Ok(threshold_grid
        .iter()
        .map(|&threshold| RocPoint {
            threshold,
            p_false_alarm: exceedance(&noise_only, threshold),
            p_detect: exceedance(&signal, threshold),
        })
        .collect())
}

/// Detection probability at the threshold that yields `target_pf` on the
/// simulated noise-only statistics (empirical Neyman-Pearson operating point).
pub fn detection_at_false_alarm<R: Rng + ?Sized>(
    snr: f64,
    num_samples: usize,
    target_pf: f64,
    trials: usize,
    rng: &mut R,
) -> Result<DetectionRates, Error> {
    validate_detector(snr, num_samples, trials)?;
    if !(target_pf > 0.0 && target_pf < 1.0) {
        return Err(Error::InvalidParameter {
            name: "target_pf",
            constraint: "in (0, 1)",
            value: target_pf,
        });
    }
    let (mut noise_only, signal) = simulate_statistics(snr, num_samples, trials, rng);
    noise_only.sort_by(f64::total_cmp);
    let exceed = ((target_pf * trials as f64).round() as usize).clamp(1, trials);
    let threshold = noise_only[trials - exceed];
    Ok(DetectionRates {
        p_detect: exceedance(&signal, threshold),
        p_false_alarm: exceedance(&noise_only, threshold),
    })
}
