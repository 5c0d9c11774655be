//! Outage probability per scheme, by Monte Carlo and by an independent
//! analytic route, plus energy-efficiency tradeoff curves.

mod analytic;
pub mod distribution;
mod montecarlo;
pub mod quadrature;
mod sweep;

pub use analytic::outage_analytic;
pub use montecarlo::{outage_mc, outage_mc_cells};
pub use sweep::{
    analytic_curves, default_power_grid, efficiency_at_outage, log_spaced_grid, tradeoff_sweep, TradeoffCurve,
    TradeoffPoint,
};

use crate::error::{ensure_positive, Error};

/// Below this many expected outage events a Monte Carlo cell is too sparse
/// for the normal approximation.
pub const RARE_EVENT_COUNT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    MonteCarlo,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub mean: f64,
    /// Binomial standard error sqrt(p(1-p)/n); zero for analytic values.
    pub stderr: f64,
    pub trials: u64,
    pub outages: u64,
    pub method: EstimateMethod,
}

impl OutageEstimate {
    pub fn analytic(mean: f64) -> Self {
        Self {
            mean,
            stderr: 0.0,
            trials: 0,
            outages: 0,
            method: EstimateMethod::Analytic,
        }
    }

    pub fn from_counts(outages: u64, trials: u64) -> Self {
        assert!(trials > 0 && outages <= trials);
        let n = trials as f64;
        let mean = outages as f64 / n;
        Self {
            mean,
            stderr: (mean * (1.0 - mean) / n).sqrt(),
            trials,
            outages,
            method: EstimateMethod::MonteCarlo,
        }
    }

    /// `z`-sigma interval: normal approximation, or the Wilson score
    /// interval when fewer than ten outages were observed.
    pub fn confidence_interval(&self, z: f64) -> (f64, f64) {
        match self.method {
            EstimateMethod::Analytic => (self.mean, self.mean),
            EstimateMethod::MonteCarlo if (self.outages as f64) < RARE_EVENT_COUNT => {
                let n = self.trials as f64;
                let p = self.mean;
                let z2 = z * z;
                let denom = 1.0 + z2 / n;
                let center = (p + z2 / (2.0 * n)) / denom;
                let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
                ((center - half).max(0.0), (center + half).min(1.0))
            }
            EstimateMethod::MonteCarlo => (
                (self.mean - z * self.stderr).max(0.0),
                (self.mean + z * self.stderr).min(1.0),
            ),
        }
    }

    pub fn is_consistent_with(&self, probability: f64, z: f64) -> bool {
        let (lo, hi) = self.confidence_interval(z);
        (lo..=hi).contains(&probability)
    }
}

/// Delivered bits per joule of transmit energy, R / P.
pub fn energy_efficiency(rate_bps: f64, total_power_w: f64) -> Result<f64, Error> {
    ensure_positive("total_power_w", total_power_w)?;
    Ok(rate_bps / total_power_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn efficiency_examples() {
        assert_eq!(energy_efficiency(30e6, 1.0).unwrap(), 3e7);
        assert_eq!(energy_efficiency(30e6, 0.5).unwrap(), 6e7);
        assert_eq!(energy_efficiency(30e6, 0.8).unwrap() / energy_efficiency(30e6, 1.6).unwrap(), 2.0);
        assert!(energy_efficiency(30e6, 0.0).is_err());
    }

    #[test]
    fn estimate_stderr() {
        let e = OutageEstimate::from_counts(3_084, 1_000_000);
        assert!((e.stderr - (e.mean * (1.0 - e.mean) / 1e6).sqrt()).abs() < 1e-18);
        assert!((e.stderr - 5.5e-5).abs() < 1e-6);
        let (lo, hi) = e.confidence_interval(4.0);
        assert!((hi - lo - 8.0 * e.stderr).abs() < 1e-15);
    }

    #[test]
    fn wilson_fallback_for_sparse_counts() {
        let e = OutageEstimate::from_counts(0, 1_000_000);
        assert_eq!(e.stderr, 0.0);
        let (lo, hi) = e.confidence_interval(4.0);
        assert_eq!(lo, 0.0);
        assert!((hi - 16.0 / (1e6 + 16.0)).abs() < 1e-12);
        assert!(e.is_consistent_with(1e-6, 4.0));
        assert!(!e.is_consistent_with(1e-4, 4.0));
    }
}
