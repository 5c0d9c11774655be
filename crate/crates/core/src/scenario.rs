use crate::error::{ensure_positive, Error};
use crate::linkmodel::{self, db_to_linear, LinkParams, NoiseModel, RadioBand};
use crate::schemes::{AllocationPolicy, Plane, SchemeKind, Transmitter};
use crate::sensing::SensingProfile;

/// One link per frequency plane for a given transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneLinks {
    pub cellular: LinkParams,
    pub tv: LinkParams,
}

impl PlaneLinks {
    pub fn same(link: LinkParams) -> Self {
        Self {
            cellular: link,
            tv: link,
        }
    }

    pub fn on(&self, plane: Plane) -> &LinkParams {
        match plane {
            Plane::Cellular => &self.cellular,
            Plane::Tv => &self.tv,
        }
    }
}

/// Everything needed to evaluate outage for the downlink to one UT.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub cellular_band: RadioBand,
    pub tv_band: RadioBand,
    /// BS to UT, per plane.
    pub bs_links: PlaneLinks,
    /// Cooperative TVS to UT, per plane.
    pub tvs_links: PlaneLinks,
    /// TV broadcast to UT, active only under a missed detection.
    pub interference_link: LinkParams,
    pub tvs_power_w: f64,
    pub noise: NoiseModel,
    pub sensing: SensingProfile,
    pub rate_bps: f64,
    pub schemes: Vec<SchemeKind>,
    pub allocation: AllocationPolicy,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), Error> {
        ensure_positive("rate_bps", self.rate_bps)?;
        if !(self.tvs_power_w >= 0.0 && self.tvs_power_w.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tvs_power_w",
                constraint: "finite and >= 0",
                value: self.tvs_power_w,
            });
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidInput("scheme list is empty".into()));
        }
        self.allocation.validate()
    }

    pub fn band(&self, plane: Plane) -> &RadioBand {
        match plane {
            Plane::Cellular => &self.cellular_band,
            Plane::Tv => &self.tv_band,
        }
    }

    pub fn link(&self, tx: Transmitter, plane: Plane) -> &LinkParams {
        match tx {
            Transmitter::Bs => self.bs_links.on(plane),
            Transmitter::Tvs => self.tvs_links.on(plane),
        }
    }

    pub fn noise_power(&self, plane: Plane) -> f64 {
        linkmodel::noise_power(&self.noise, self.band(plane).bandwidth_hz())
    }

    /// SINR below which the plane capacity B·log2(1 + SINR) misses the rate.
    pub fn sinr_threshold(&self, plane: Plane) -> f64 {
        (self.rate_bps / self.band(plane).bandwidth_hz()).exp2() - 1.0
    }

    /// Schemes in canonical order, duplicates removed.
    pub fn ordered_schemes(&self) -> Vec<SchemeKind> {
        let mut schemes = self.schemes.clone();
        schemes.sort();
        schemes.dedup();
        schemes
    }

    pub fn with_sensing(mut self, sensing: SensingProfile) -> Self {
        self.sensing = sensing;
        self
    }
}

impl Default for ScenarioConfig {
    /// LTE band at 2100 MHz / 5 MHz, VHF TV channel 2 at 55.25 MHz / 6 MHz,
    /// 30 Mbit/s, G_BS = G_TVS = 5 dB, G_UT = 0 dB, 1 km links with unit-mean
    /// Rayleigh fading, P_d = 0.99, P_f = 0.01, P_a = 0.8, 45 kW TV station,
    /// 290 K.
    fn default() -> Self {
        let g_bs = db_to_linear(5.0);
        let g_ut = db_to_linear(0.0);
        let link = LinkParams::new(1000.0, g_bs, g_ut, 1.0).expect("default link is valid");
        Self {
            cellular_band: RadioBand::new(2100e6, 5e6).expect("default band is valid"),
            tv_band: RadioBand::new(55.25e6, 6e6).expect("default band is valid"),
            bs_links: PlaneLinks::same(link),
            tvs_links: PlaneLinks::same(link),
            interference_link: link,
            tvs_power_w: 45e3,
            noise: NoiseModel::default(),
            sensing: SensingProfile::default(),
            rate_bps: 30e6,
            schemes: SchemeKind::ALL.to_vec(),
            allocation: AllocationPolicy::default(),
        }
    }
}
