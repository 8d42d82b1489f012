//! Transition amplitudes for Unruh-DeWitt detectors and the analogous
//! dispersion-engineered SPDC process.

mod amplitude;
pub mod analogy;
pub mod dispersion;
pub mod error;
pub mod oscquad;
pub mod scalar;
pub mod spdc;
pub mod special;
pub mod udw;

pub use amplitude::AmplitudeResult;
pub use error::{Error, QuadError, Result};
pub use scalar::{sinc, Real, RealFn};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

pub type Integrand = oscquad::OscillatoryIntegrand<f64>;
pub type Config = oscquad::QuadConfig<f64>;
pub type Amplitude = AmplitudeResult<f64>;
pub type Scenario = spdc::SpdcScenario<f64>;
pub type Pump = spdc::PumpPulse<f64>;
pub type Waveguide = spdc::WaveguideSpec<f64>;
pub type UdwParams = analogy::UdwSide<f64>;
pub type SpdcParams = analogy::SpdcSide<f64>;
