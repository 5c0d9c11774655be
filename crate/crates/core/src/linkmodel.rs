//! Link-budget arithmetic and the stochastic primitives (Rayleigh power
//! fading, thermal noise) shared by every transmission scheme.
//!
//! All quantities are linear-domain: watts, hertz, metres and plain power
//! ratios. Decibel inputs are converted once at the configuration boundary
//! with [`db_to_linear`].

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{ensure_positive, Error};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant, J/K, at the precision used for the noise floor.
pub const BOLTZMANN: f64 = 1.38e-23;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts * 1e3)
}

/// A carrier frequency and the bandwidth occupied around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioBand {
    carrier_hz: f64,
    bandwidth_hz: f64,
}

impl RadioBand {
    pub fn new(carrier_hz: f64, bandwidth_hz: f64) -> Result<Self, Error> {
        ensure_positive("carrier_hz", carrier_hz)?;
        ensure_positive("bandwidth_hz", bandwidth_hz)?;
        Ok(Self {
            carrier_hz,
            bandwidth_hz,
        })
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }
}

/// Geometry and antenna gains of one transmitter to receiver link.
///
/// `fading_mean_sq` is the mean of the Rayleigh power gain |h|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    distance_m: f64,
    tx_gain_linear: f64,
    rx_gain_linear: f64,
    fading_mean_sq: f64,
}

impl LinkParams {
    pub fn new(
        distance_m: f64,
        tx_gain_linear: f64,
        rx_gain_linear: f64,
        fading_mean_sq: f64,
    ) -> Result<Self, Error> {
        ensure_positive("distance_m", distance_m)?;
        ensure_positive("tx_gain_linear", tx_gain_linear)?;
        ensure_positive("rx_gain_linear", rx_gain_linear)?;
        ensure_positive("fading_mean_sq", fading_mean_sq)?;
        Ok(Self {
            distance_m,
            tx_gain_linear,
            rx_gain_linear,
            fading_mean_sq,
        })
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_m
    }

    pub fn tx_gain_linear(&self) -> f64 {
        self.tx_gain_linear
    }

    pub fn rx_gain_linear(&self) -> f64 {
        self.rx_gain_linear
    }

    pub fn fading_mean_sq(&self) -> f64 {
        self.fading_mean_sq
    }
}

/// Thermal noise at a fixed system temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    temperature_k: f64,
}

impl NoiseModel {
    pub fn new(temperature_k: f64) -> Result<Self, Error> {
        ensure_positive("temperature_k", temperature_k)?;
        Ok(Self { temperature_k })
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }

    /// Noise power spectral density κT, W/Hz.
    pub fn psd_w_per_hz(&self) -> f64 {
        BOLTZMANN * self.temperature_k
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            temperature_k: 290.0,
        }
    }
}

/// One realization of the power fading gain |h|².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FadingDraw(f64);

impl FadingDraw {
    /// Panics if `gain_sq` is negative or NaN.
    pub fn new(gain_sq: f64) -> Self {
        assert!(gain_sq >= 0.0, "fading power gain must be non-negative, got {gain_sq}");
        Self(gain_sq)
    }

    pub fn gain_sq(self) -> f64 {
        self.0
    }
}

/// Deterministic part of the received-to-transmitted power ratio:
/// free-space spreading loss times both antenna gains, without |h|².
pub fn path_gain(band: &RadioBand, link: &LinkParams) -> f64 {
    let spreading = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * band.carrier_hz * link.distance_m);
    spreading * spreading * link.tx_gain_linear * link.rx_gain_linear
}

pub fn received_power(tx_power_w: f64, band: &RadioBand, link: &LinkParams, fading: FadingDraw) -> f64 {
    debug_assert!(tx_power_w >= 0.0);
    tx_power_w * path_gain(band, link) * fading.gain_sq()
}

/// Mean received power, i.e. [`received_power`] averaged over the fading.
pub fn mean_received_power(tx_power_w: f64, band: &RadioBand, link: &LinkParams) -> f64 {
    tx_power_w * path_gain(band, link) * link.fading_mean_sq
}

/// κ·T·B in watts.
pub fn noise_power(noise: &NoiseModel, bandwidth_hz: f64) -> f64 {
    debug_assert!(bandwidth_hz > 0.0);
    noise.psd_w_per_hz() * bandwidth_hz
}

/// Draws |h|² ~ Exp(mean = `fading_mean_sq`).
///
/// The draw is a unit-mean exponential scaled by the link mean, so two links
/// sampled from identical stream states differ exactly by the ratio of their
/// means.
pub fn sample_fading<R: Rng + ?Sized>(link: &LinkParams, rng: &mut R) -> FadingDraw {
    let unit: f64 = rng.sample(Exp1);
    FadingDraw(unit * link.fading_mean_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cellular() -> RadioBand {
        RadioBand::new(2100e6, 5e6).unwrap()
    }

    fn bs_link(tx_gain: f64) -> LinkParams {
        LinkParams::new(1000.0, tx_gain, 1.0, 1.0).unwrap()
    }

    // Hand evaluation of (c / 4πfd)² with c = 299792458 m/s.
    const UNITY_PATH_GAIN_2100MHZ_1KM: f64 = 1.290_574_525_429_354e-10;

    #[test]
    fn path_gain_table_geometry() {
        let unity = path_gain(&cellular(), &bs_link(1.0));
        assert!((unity / UNITY_PATH_GAIN_2100MHZ_1KM - 1.0).abs() < 1e-12);

        let with_bs_gain = path_gain(&cellular(), &bs_link(db_to_linear(5.0)));
        assert!((with_bs_gain - 4.081_154_990_547_654e-10).abs() < 1e-20);
    }

    #[test]
    fn path_gain_with_rounded_light_speed_matches_listed_values() {
        // The reference values 4.0868e-10 and 1.2924e-10 were computed with
        // c = 3e8; rescaling removes the whole discrepancy.
        let rescale = (3e8 / SPEED_OF_LIGHT).powi(2);
        let g5 = path_gain(&cellular(), &bs_link(db_to_linear(5.0))) * rescale;
        let g0 = path_gain(&cellular(), &bs_link(1.0)) * rescale;
        assert!((g5 - 4.0868e-10).abs() <= 1e-14);
        assert!((g0 - 1.2924e-10).abs() <= 1e-14);
    }

    #[test]
    fn path_gain_is_one_when_circumference_equals_wavelength() {
        let band = RadioBand::new(55.25e6, 6e6).unwrap();
        let d = band.wavelength_m() / (4.0 * std::f64::consts::PI);
        let link = LinkParams::new(d, 1.0, 1.0, 1.0).unwrap();
        assert!((path_gain(&band, &link) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_square_and_frequency_scaling() {
        let band = cellular();
        let near = path_gain(&band, &LinkParams::new(250.0, 1.0, 1.0, 1.0).unwrap()) * 250.0f64.powi(2);
        let far = path_gain(&band, &LinkParams::new(4000.0, 1.0, 1.0, 1.0).unwrap()) * 4000.0f64.powi(2);
        assert!((near / far - 1.0).abs() < 1e-12);

        let tv = RadioBand::new(55.25e6, 6e6).unwrap();
        let ratio = path_gain(&tv, &bs_link(1.0)) / path_gain(&band, &bs_link(1.0));
        assert!((ratio / (2100.0f64 / 55.25).powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn received_power_degenerate_cases() {
        let band = cellular();
        let link = bs_link(db_to_linear(5.0));
        let pg = path_gain(&band, &link);
        assert_eq!(received_power(1.0, &band, &link, FadingDraw::new(1.0)), pg);
        assert_eq!(received_power(0.0, &band, &link, FadingDraw::new(1.0)), 0.0);
        assert_eq!(received_power(1.0, &band, &link, FadingDraw::new(0.0)), 0.0);
        let a = received_power(3.0, &band, &link, FadingDraw::new(0.5));
        let b = received_power(1.0, &band, &link, FadingDraw::new(1.0));
        assert!((a / b - 1.5).abs() < 1e-12);
    }

    #[test]
    fn noise_floor() {
        let noise = NoiseModel::default();
        assert!((noise_power(&noise, 5e6) - 2.0010e-14).abs() < 1e-18);
        assert!((noise_power(&noise, 6e6) - 2.4012e-14).abs() < 1e-18);
        assert_eq!(noise_power(&noise, 10e6), 2.0 * noise_power(&noise, 5e6));
        let dbm = watts_to_dbm(noise_power(&noise, 1.0));
        assert!((dbm + 173.98).abs() <= 0.05, "{dbm}");
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(RadioBand::new(0.0, 1.0).is_err());
        assert!(RadioBand::new(1.0, -1.0).is_err());
        assert!(LinkParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(LinkParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(LinkParams::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(NoiseModel::new(0.0).is_err());
    }

    #[test]
    fn fading_sample_mean() {
        let link = bs_link(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let mean = (0..n).map(|_| sample_fading(&link, &mut rng).gain_sq()).sum::<f64>() / n as f64;
        // 4 sigma of the sample mean of Exp(1) is 0.004.
        assert!((mean - 1.0).abs() < 0.005, "{mean}");
    }

    #[test]
    fn fading_scales_with_mean() {
        let unit = LinkParams::new(1000.0, 1.0, 1.0, 1.0).unwrap();
        let doubled = LinkParams::new(1000.0, 1.0, 1.0, 2.0).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let x = sample_fading(&unit, &mut a).gain_sq();
            let y = sample_fading(&doubled, &mut b).gain_sq();
            assert_eq!(y, 2.0 * x);
        }
    }

    #[test]
    fn fading_is_seed_deterministic() {
        let link = bs_link(1.0);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..64).map(|_| sample_fading(&link, &mut rng).gain_sq()).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn fading_passes_kolmogorov_smirnov() {
        let link = bs_link(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n).map(|_| sample_fading(&link, &mut rng).gain_sq()).collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let cdf = 1.0 - (-x).exp();
                let lo = i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64;
                (cdf - lo).abs().max((hi - cdf).abs())
            })
            .fold(0.0, f64::max);
        // Asymptotic critical value at alpha = 0.01 is 1.628 / sqrt(n).
        assert!(d < 1.628 / (n as f64).sqrt(), "KS statistic {d}");
    }
}
