//! The four downlink transmission schemes as per-trial success/failure logic.
//!
//! | scheme            | detected busy                | detected idle                          |
//! |-------------------|------------------------------|----------------------------------------|
//! | direct            | BS on cellular, P            | BS on cellular, P                      |
//! | pure cooperation  | BS+TVS Alamouti, P/2 each    | BS+TVS Alamouti, P/2 each              |
//! | pure cognition    | BS on cellular, P            | BS on cellular and TV, P/2 each        |
//! | joint             | BS+TVS Alamouti, P/2 each    | Alamouti on both planes, P/4 per branch |
//!
//! When the TV plane is used, the UT decodes from whichever plane supports
//! the rate, so an outage needs both planes to fail.

pub mod alamouti;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::Error;
use crate::linkmodel::{path_gain, sample_fading, FadingDraw};
use crate::scenario::ScenarioConfig;
use crate::sensing::{sample_outcome, ChannelState, SensingRealization};

pub use alamouti::{
    alamouti_combine, alamouti_decode, alamouti_effective_snr, alamouti_encode, post_detection_snr,
    received_block,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeKind {
    Direct,
    PureCognition,
    PureCooperation,
    JointCognitionCooperation,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::Direct,
        SchemeKind::PureCognition,
        SchemeKind::PureCooperation,
        SchemeKind::JointCognitionCooperation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Direct => "direct",
            SchemeKind::PureCognition => "pure_cognition",
            SchemeKind::PureCooperation => "pure_cooperation",
            SchemeKind::JointCognitionCooperation => "joint",
        }
    }

    /// Whether the scheme ever transmits on a sensed-idle TV channel.
    pub fn uses_cognition(self) -> bool {
        matches!(self, SchemeKind::PureCognition | SchemeKind::JointCognitionCooperation)
    }

    pub fn uses_cooperation(self) -> bool {
        matches!(self, SchemeKind::PureCooperation | SchemeKind::JointCognitionCooperation)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "direct" => Ok(SchemeKind::Direct),
            "pure_cognition" | "cognition" => Ok(SchemeKind::PureCognition),
            "pure_cooperation" | "cooperation" => Ok(SchemeKind::PureCooperation),
            "joint" | "joint_cognition_cooperation" => Ok(SchemeKind::JointCognitionCooperation),
            other => Err(Error::InvalidInput(format!(
                "unknown scheme '{other}', expected one of direct, pure_cognition, pure_cooperation, joint"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transmitter {
    Bs,
    Tvs,
}

impl Transmitter {
    pub const ALL: [Transmitter; 2] = [Transmitter::Bs, Transmitter::Tvs];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Plane {
    Cellular,
    Tv,
}

impl Plane {
    pub const ALL: [Plane; 2] = [Plane::Cellular, Plane::Tv];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Plane::Cellular => "cellular",
            Plane::Tv => "TV",
        })
    }
}

/// Split of the joint scheme's power over its four branches when the TV
/// channel is sensed idle, as fractions of P in the order
/// (BS/cellular, TVS/cellular, BS/TV, TVS/TV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationPolicy {
    pub joint_idle_shares: [f64; 4],
}

impl AllocationPolicy {
    pub fn validate(&self) -> Result<(), Error> {
        let shares = &self.joint_idle_shares;
        if shares.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "joint_idle_shares must be non-negative, got {shares:?}"
            )));
        }
        let sum: f64 = shares.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("joint_idle_shares must sum to 1, got {sum}")));
        }
        if shares[0] + shares[1] == 0.0 {
            return Err(Error::InvalidInput("joint_idle_shares leave the cellular plane empty".into()));
        }
        Ok(())
    }

    pub fn allocate(&self, scheme: SchemeKind, total_power_w: f64, detected: ChannelState) -> PowerAllocation {
        use Plane::*;
        use Transmitter::*;

        let mut alloc = PowerAllocation {
            scheme,
            total_power_w,
            shares: [[0.0; 2]; 2],
        };
        let p = total_power_w;
        match (scheme, detected) {
            (SchemeKind::Direct, _) | (SchemeKind::PureCognition, ChannelState::Busy) => {
                alloc.set(Bs, Cellular, p);
            }
            (SchemeKind::PureCooperation, _) | (SchemeKind::JointCognitionCooperation, ChannelState::Busy) => {
                alloc.set(Bs, Cellular, p / 2.0);
                alloc.set(Tvs, Cellular, p / 2.0);
            }
            (SchemeKind::PureCognition, ChannelState::Idle) => {
                alloc.set(Bs, Cellular, p / 2.0);
                alloc.set(Bs, Tv, p / 2.0);
            }
            (SchemeKind::JointCognitionCooperation, ChannelState::Idle) => {
                let [bs_cell, tvs_cell, bs_tv, tvs_tv] = self.joint_idle_shares;
                alloc.set(Bs, Cellular, p * bs_cell);
                alloc.set(Tvs, Cellular, p * tvs_cell);
                alloc.set(Bs, Tv, p * bs_tv);
                alloc.set(Tvs, Tv, p * tvs_tv);
            }
        }
        alloc
    }
}

impl Default for AllocationPolicy {
    fn default() -> Self {
        Self {
            joint_idle_shares: [0.25; 4],
        }
    }
}

/// Transmit power per (transmitter, plane) branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    scheme: SchemeKind,
    total_power_w: f64,
    shares: [[f64; 2]; 2],
}

impl PowerAllocation {
    fn set(&mut self, tx: Transmitter, plane: Plane, watts: f64) {
        self.shares[tx.index()][plane.index()] = watts;
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn total_power_w(&self) -> f64 {
        self.total_power_w
    }

    pub fn share(&self, tx: Transmitter, plane: Plane) -> f64 {
        self.shares[tx.index()][plane.index()]
    }

    pub fn is_active(&self, plane: Plane) -> bool {
        Transmitter::ALL.iter().any(|&tx| self.share(tx, plane) > 0.0)
    }

    pub fn allocated_sum(&self) -> f64 {
        self.shares.iter().flatten().sum()
    }
}

/// Default-policy allocation.
pub fn allocate_power(scheme: SchemeKind, total_power_w: f64, detected: ChannelState) -> PowerAllocation {
    AllocationPolicy::default().allocate(scheme, total_power_w, detected)
}

/// Random state of one transmission attempt: four independent signal links
/// (BS and TVS, on each plane), the TV broadcast interference link, and the
/// sensing outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRealization {
    fading: [[FadingDraw; 2]; 2],
    pub interference: FadingDraw,
    pub sensing: SensingRealization,
}

impl TrialRealization {
    pub fn new(
        bs: [FadingDraw; 2],
        tvs: [FadingDraw; 2],
        interference: FadingDraw,
        sensing: SensingRealization,
    ) -> Self {
        Self {
            fading: [bs, tvs],
            interference,
            sensing,
        }
    }

    /// Every link faded with the same power gain.
    pub fn uniform(gain_sq: f64, sensing: SensingRealization) -> Self {
        let g = FadingDraw::new(gain_sq);
        Self::new([g; 2], [g; 2], g, sensing)
    }

    pub fn fading(&self, tx: Transmitter, plane: Plane) -> FadingDraw {
        self.fading[tx.index()][plane.index()]
    }
}

/// Draw order: sensing (two uniforms), BS/cellular, TVS/cellular, BS/TV,
/// TVS/TV, interference.
pub fn sample_trial<R: Rng + ?Sized>(scenario: &ScenarioConfig, rng: &mut R) -> TrialRealization {
    let sensing = sample_outcome(&scenario.sensing, rng);
    let bs_cell = sample_fading(&scenario.bs_links.cellular, rng);
    let tvs_cell = sample_fading(&scenario.tvs_links.cellular, rng);
    let bs_tv = sample_fading(&scenario.bs_links.tv, rng);
    let tvs_tv = sample_fading(&scenario.tvs_links.tv, rng);
    let interference = sample_fading(&scenario.interference_link, rng);
    TrialRealization::new([bs_cell, bs_tv], [tvs_cell, tvs_tv], interference, sensing)
}

/// Path gains and noise floors of a scenario, computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    path_gain: [[f64; 2]; 2],
    noise_w: [f64; 2],
    bandwidth_hz: [f64; 2],
    /// P_TVS times the interference link's path gain.
    interference_scale_w: f64,
    rate_bps: f64,
}

impl LinkBudget {
    pub fn new(scenario: &ScenarioConfig) -> Self {
        let mut path_gains = [[0.0; 2]; 2];
        for tx in Transmitter::ALL {
            for plane in Plane::ALL {
                path_gains[tx.index()][plane.index()] = path_gain(scenario.band(plane), scenario.link(tx, plane));
            }
        }
        Self {
            path_gain: path_gains,
            noise_w: Plane::ALL.map(|p| scenario.noise_power(p)),
            bandwidth_hz: Plane::ALL.map(|p| scenario.band(p).bandwidth_hz()),
            interference_scale_w: scenario.tvs_power_w * path_gain(&scenario.tv_band, &scenario.interference_link),
            rate_bps: scenario.rate_bps,
        }
    }

    pub fn path_gain(&self, tx: Transmitter, plane: Plane) -> f64 {
        self.path_gain[tx.index()][plane.index()]
    }

    pub fn noise_w(&self, plane: Plane) -> f64 {
        self.noise_w[plane.index()]
    }

    pub fn interference_scale_w(&self) -> f64 {
        self.interference_scale_w
    }

    fn received(&self, alloc: &PowerAllocation, tx: Transmitter, plane: Plane, trial: &TrialRealization) -> f64 {
        alloc.share(tx, plane) * self.path_gain(tx, plane) * trial.fading(tx, plane).gain_sq()
    }

    pub fn interference_w(&self, plane: Plane, trial: &TrialRealization) -> f64 {
        if plane == Plane::Tv && trial.sensing.is_missed_detection() {
            self.interference_scale_w * trial.interference.gain_sq()
        } else {
            0.0
        }
    }

    pub fn branch_sinr(&self, alloc: &PowerAllocation, plane: Plane, trial: &TrialRealization) -> Result<f64, Error> {
        if !alloc.is_active(plane) {
            return Err(Error::InactivePlane {
                scheme: alloc.scheme,
                plane,
            });
        }
        let denominator = self.noise_w(plane) + self.interference_w(plane, trial);
        Ok(alamouti_effective_snr(
            self.received(alloc, Transmitter::Bs, plane, trial),
            self.received(alloc, Transmitter::Tvs, plane, trial),
            denominator,
        ))
    }

    pub fn branch_capacity(&self, alloc: &PowerAllocation, plane: Plane, trial: &TrialRealization) -> BranchCapacity {
        let capacity_bps = match self.branch_sinr(alloc, plane, trial) {
            Ok(sinr) => self.bandwidth_hz[plane.index()] * sinr.ln_1p() / std::f64::consts::LN_2,
            Err(_) => 0.0,
        };
        BranchCapacity { plane, capacity_bps }
    }

    /// Outage test for an already-resolved allocation.
    pub fn allocation_outage(&self, alloc: &PowerAllocation, trial: &TrialRealization) -> bool {
        let fails = |plane| self.branch_capacity(alloc, plane, trial).capacity_bps < self.rate_bps;
        fails(Plane::Cellular) && (!alloc.is_active(Plane::Tv) || fails(Plane::Tv))
    }
}

/// Shannon capacity of one frequency plane, zero when the plane is unused.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCapacity {
    pub plane: Plane,
    pub capacity_bps: f64,
}

pub fn branch_sinr(
    alloc: &PowerAllocation,
    plane: Plane,
    trial: &TrialRealization,
    scenario: &ScenarioConfig,
) -> Result<f64, Error> {
    LinkBudget::new(scenario).branch_sinr(alloc, plane, trial)
}

pub fn trial_outage(
    scheme: SchemeKind,
    total_power_w: f64,
    trial: &TrialRealization,
    scenario: &ScenarioConfig,
) -> bool {
    let alloc = scenario.allocation.allocate(scheme, total_power_w, trial.sensing.detected);
    LinkBudget::new(scenario).allocation_outage(&alloc, trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkmodel::{received_power, LinkParams};
    use crate::sensing::{SensingProfile, ALL_OUTCOMES};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const IDLE_IDLE: SensingRealization = SensingRealization::new(ChannelState::Idle, ChannelState::Idle);
    const BUSY_BUSY: SensingRealization = SensingRealization::new(ChannelState::Busy, ChannelState::Busy);
    const MISSED: SensingRealization = SensingRealization::new(ChannelState::Busy, ChannelState::Idle);

    #[test]
    fn allocation_examples() {
        let coop = allocate_power(SchemeKind::PureCooperation, 1.0, ChannelState::Idle);
        assert_eq!(coop.share(Transmitter::Bs, Plane::Cellular), 0.5);
        assert_eq!(coop.share(Transmitter::Tvs, Plane::Cellular), 0.5);
        assert!(!coop.is_active(Plane::Tv));

        let direct = allocate_power(SchemeKind::Direct, 2.0, ChannelState::Busy);
        assert_eq!(direct.share(Transmitter::Bs, Plane::Cellular), 2.0);
        assert_eq!(direct.allocated_sum(), 2.0);

        let joint = allocate_power(SchemeKind::JointCognitionCooperation, 1.0, ChannelState::Idle);
        for tx in Transmitter::ALL {
            for plane in Plane::ALL {
                assert_eq!(joint.share(tx, plane), 0.25);
            }
        }

        let cog_busy = allocate_power(SchemeKind::PureCognition, 1.0, ChannelState::Busy);
        assert_eq!(cog_busy.share(Transmitter::Bs, Plane::Cellular), 1.0);
        let cog_idle = allocate_power(SchemeKind::PureCognition, 1.0, ChannelState::Idle);
        assert_eq!(cog_idle.share(Transmitter::Bs, Plane::Tv), 0.5);
        assert_eq!(cog_idle.share(Transmitter::Tvs, Plane::Tv), 0.0);
    }

    #[test]
    fn direct_sinr_table_geometry() {
        let scenario = ScenarioConfig::default();
        let alloc = allocate_power(SchemeKind::Direct, 1.0, ChannelState::Busy);
        let sinr = branch_sinr(&alloc, Plane::Cellular, &TrialRealization::uniform(1.0, BUSY_BUSY), &scenario).unwrap();
        // 4.0812e-10 / 2.0010e-14 with c = 299792458 m/s (20424 with c = 3e8).
        assert!((sinr - 20_395.577_164_156_19).abs() < 1e-6, "{sinr}");
    }

    #[test]
    fn missed_detection_interference_level() {
        let scenario = ScenarioConfig::default();
        let unity = LinkParams::new(1000.0, 1.0, 1.0, 1.0).unwrap();
        let interference = received_power(45e3, &scenario.tv_band, &unity, FadingDraw::new(1.0));
        // 45 kW * 1.8645e-7 (8.40e-3 with c = 3e8).
        assert!((interference - 8.390_148e-3).abs() < 1e-8);
        assert!(interference / scenario.noise_power(Plane::Tv) > 1e11);

        let budget = LinkBudget::new(&scenario);
        let trial = TrialRealization::uniform(1.0, MISSED);
        assert_eq!(budget.interference_w(Plane::Tv, &trial), 45e3 * budget.path_gain(Transmitter::Tvs, Plane::Tv));
        assert_eq!(budget.interference_w(Plane::Cellular, &trial), 0.0);
        assert_eq!(budget.interference_w(Plane::Tv, &TrialRealization::uniform(1.0, IDLE_IDLE)), 0.0);
    }

    #[test]
    fn inactive_tv_plane_is_rejected() {
        let scenario = ScenarioConfig::default();
        let alloc = allocate_power(SchemeKind::JointCognitionCooperation, 1.0, ChannelState::Busy);
        let err = branch_sinr(&alloc, Plane::Tv, &TrialRealization::uniform(1.0, BUSY_BUSY), &scenario).unwrap_err();
        assert!(matches!(err, Error::InactivePlane { plane: Plane::Tv, .. }));
        let cap = LinkBudget::new(&scenario).branch_capacity(&alloc, Plane::Tv, &TrialRealization::uniform(1.0, BUSY_BUSY));
        assert_eq!(cap.capacity_bps, 0.0);
    }

    #[test]
    fn zero_fading_is_zero_sinr_and_outage() {
        let scenario = ScenarioConfig::default();
        for outcome in ALL_OUTCOMES {
            let trial = TrialRealization::uniform(0.0, outcome);
            for scheme in SchemeKind::ALL {
                let alloc = scenario.allocation.allocate(scheme, 1.0, outcome.detected);
                assert_eq!(branch_sinr(&alloc, Plane::Cellular, &trial, &scenario).unwrap(), 0.0);
                assert!(trial_outage(scheme, 1e6, &trial, &scenario));
            }
        }
    }

    #[test]
    fn direct_at_unit_fading_has_no_outage() {
        let scenario = ScenarioConfig::default();
        let budget = LinkBudget::new(&scenario);
        let alloc = allocate_power(SchemeKind::Direct, 1.0, ChannelState::Busy);
        let cap = budget.branch_capacity(&alloc, Plane::Cellular, &TrialRealization::uniform(1.0, BUSY_BUSY));
        assert!((cap.capacity_bps / 1e6 - 71.6).abs() < 0.1, "{}", cap.capacity_bps);
        assert!(!trial_outage(SchemeKind::Direct, 1.0, &TrialRealization::uniform(1.0, BUSY_BUSY), &scenario));
    }

    #[test]
    fn selection_across_planes() {
        let scenario = ScenarioConfig::default();
        let g = FadingDraw::new(1.0);
        let deep = FadingDraw::new(0.0);
        let trial = TrialRealization::new([deep, g], [deep, g], g, IDLE_IDLE);
        assert!(!trial_outage(SchemeKind::JointCognitionCooperation, 1.0, &trial, &scenario));
        assert!(!trial_outage(SchemeKind::PureCognition, 1.0, &trial, &scenario));
        assert!(trial_outage(SchemeKind::PureCooperation, 1.0, &trial, &scenario));
        assert!(trial_outage(SchemeKind::Direct, 1.0, &trial, &scenario));

        // Same fading but a missed detection: the TV plane is swamped.
        let missed = TrialRealization::new([deep, g], [deep, g], g, MISSED);
        assert!(trial_outage(SchemeKind::JointCognitionCooperation, 1.0, &missed, &scenario));
    }

    #[test]
    fn scheme_collapse_without_tv_availability() {
        let scenario = ScenarioConfig::default().with_sensing(SensingProfile::new(1.0, 0.01, 0.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20_000 {
            let trial = sample_trial(&scenario, &mut rng);
            for p in [0.001, 0.01, 0.1, 1.0] {
                assert_eq!(
                    trial_outage(SchemeKind::JointCognitionCooperation, p, &trial, &scenario),
                    trial_outage(SchemeKind::PureCooperation, p, &trial, &scenario)
                );
                assert_eq!(
                    trial_outage(SchemeKind::PureCognition, p, &trial, &scenario),
                    trial_outage(SchemeKind::Direct, p, &trial, &scenario)
                );
            }
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for scheme in SchemeKind::ALL {
            assert_eq!(scheme.name().parse::<SchemeKind>().unwrap(), scheme);
        }
        assert!("relay".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn custom_joint_shares() {
        let policy = AllocationPolicy {
            joint_idle_shares: [0.5, 0.25, 0.125, 0.125],
        };
        policy.validate().unwrap();
        let alloc = policy.allocate(SchemeKind::JointCognitionCooperation, 2.0, ChannelState::Idle);
        assert_eq!(alloc.share(Transmitter::Bs, Plane::Cellular), 1.0);
        assert_eq!(alloc.allocated_sum(), 2.0);
        assert!(AllocationPolicy { joint_idle_shares: [0.5, 0.5, 0.5, 0.0] }.validate().is_err());
        assert!(AllocationPolicy { joint_idle_shares: [0.0, 0.0, 0.5, 0.5] }.validate().is_err());
    }

    fn arb_outcome() -> impl Strategy<Value = SensingRealization> {
        (0usize..4).prop_map(|i| ALL_OUTCOMES[i])
    }

    fn arb_scheme() -> impl Strategy<Value = SchemeKind> {
        (0usize..4).prop_map(|i| SchemeKind::ALL[i])
    }

    fn arb_trial() -> impl Strategy<Value = TrialRealization> {
        (prop::array::uniform5(0.0..8.0f64), arb_outcome()).prop_map(|(g, s)| {
            let d = g.map(FadingDraw::new);
            TrialRealization::new([d[0], d[1]], [d[2], d[3]], d[4], s)
        })
    }

    proptest! {
        #[test]
        fn power_is_conserved(scheme in arb_scheme(), idle in any::<bool>(), exp in -4i32..4) {
            let p = 2f64.powi(exp) * 1.5;
            let detected = if idle { ChannelState::Idle } else { ChannelState::Busy };
            let alloc = allocate_power(scheme, p, detected);
            prop_assert_eq!(alloc.allocated_sum(), p);
        }

        #[test]
        fn more_power_never_causes_outage(scheme in arb_scheme(), trial in arb_trial(), p in 1e-4..10.0f64, k in 1.0..100.0f64) {
            let scenario = ScenarioConfig::default();
            if trial_outage(scheme, p * k, &trial, &scenario) {
                prop_assert!(trial_outage(scheme, p, &trial, &scenario));
            }
        }

        #[test]
        fn higher_rate_never_cures_outage(scheme in arb_scheme(), trial in arb_trial(), p in 1e-4..10.0f64, k in 1.0..3.0f64) {
            let low = ScenarioConfig::default();
            let high = ScenarioConfig { rate_bps: low.rate_bps * k, ..low.clone() };
            if trial_outage(scheme, p, &trial, &low) {
                prop_assert!(trial_outage(scheme, p, &trial, &high));
            }
        }
    }
}
