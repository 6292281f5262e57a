//! Wess-Zumino terms of harmonic maps into compact Lie groups: root-system data, closed-form
//! evaluations, Chern-Simons holonomy on the moduli of flat connections, genus-0 spectral
//! curves for harmonic tori in SU(2), discrete flat families and Monte Carlo volume checks.

pub mod closedforms;
pub mod error;
pub mod flatfam;
pub mod modulipath;
pub mod numeric;
pub mod oracle;
pub mod rootsys;
pub mod scalar;
pub mod spectral;

pub use error::{Result, WzError};
pub use rootsys::{build_group, killing_oracle, GroupData, GroupType, Rational, Series};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type AngleClass64 = closedforms::AngleClass<f64>;
pub type AngleClass32 = closedforms::AngleClass<f32>;
pub type CartanPath64 = modulipath::CartanPath<f64>;
pub type SpectralCurve64 = spectral::SpectralCurveP0<f64>;
pub type LogMuData64 = spectral::LogMuData<f64>;
pub type LiftedCirclePath64 = spectral::LiftedCirclePath<f64>;
pub type DiscreteTorusMap64 = flatfam::DiscreteTorusMap<f64>;
pub type DiscreteTorusMap32 = flatfam::DiscreteTorusMap<f32>;
pub type ConnectionSample64 = flatfam::ConnectionSample<f64>;
