//! Energy efficiency versus outage for four cellular downlink schemes:
//! direct transmission, pure cognition (repeat on a sensed-idle TV channel),
//! pure cooperation (BS and TV station Alamouti-coded on the cellular band),
//! and joint cognition with cooperation.
//!
//! Outage is evaluated both by seeded Monte Carlo simulation and by an
//! independent analytic route (closed forms plus quadrature).

pub mod error;
pub mod evaluate;
pub mod linkmodel;
pub mod scenario;
pub mod schemes;
pub mod sensing;
pub mod streams;

pub use error::Error;
pub use evaluate::{
    analytic_curves, efficiency_at_outage, energy_efficiency, outage_analytic, outage_mc, tradeoff_sweep,
    EstimateMethod, OutageEstimate, TradeoffCurve, TradeoffPoint,
};
pub use linkmodel::{FadingDraw, LinkParams, NoiseModel, RadioBand};
pub use scenario::{PlaneLinks, ScenarioConfig};
pub use schemes::{AllocationPolicy, Plane, PowerAllocation, SchemeKind, TrialRealization, Transmitter};
pub use sensing::{ChannelState, SensingProfile, SensingRealization};
