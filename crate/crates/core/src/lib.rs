//! Collisional magnetometry with a Feshbach-tuned quasi-1D waveguide.
//!
//! Atoms sent through a tightly confining waveguide scatter off a pinned
//! impurity; near a Feshbach resonance the transmission probability depends
//! strongly on the magnetic field, so counting transmitted atoms measures the
//! field. This crate models the full chain:
//!
//! - [`units`]: natural units (lengths in ā, ħ = m = 1) and lab conversions,
//! - [`scattering`]: field-dependent scattering length, quasi-1D phase shift
//!   through the Hurwitz-zeta confinement factor, transmission T(B, p),
//! - [`metrology`]: Fisher information, Cramér-Rao precision bounds, detector
//!   inefficiency, closed-form asymptotics, momentum averaging, error budgets,
//! - [`estimation`]: Monte Carlo counting plus maximum-likelihood inversion,
//!   demonstrating saturation of the Cramér-Rao bound,
//! - [`optimizer`]: feature location and ΔB minimization over (B, p).
//!
//! All core routines are generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root pin the common
//! double-precision instantiations.

pub mod error;
pub mod estimation;
pub mod metrology;
pub mod optimizer;
pub mod quadrature;
pub mod real;
pub mod rootfind;
pub mod scattering;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use real::Real;

/// Double-precision aliases for the domain types.
pub type Species64 = units::Species<f64>;
pub type UnitSystem64 = units::UnitSystem<f64>;
pub type ResonanceParams64 = scattering::ResonanceParams<f64>;
pub type TrapGeometry64 = scattering::TrapGeometry<f64>;
pub type Collision64 = scattering::Collision<f64>;
pub type DetectorModel64 = metrology::DetectorModel<f64>;
pub type SensorBudget64 = metrology::SensorBudget<f64>;
pub type CountRecord64 = estimation::CountRecord<f64>;
pub type EstimationResult64 = estimation::EstimationResult<f64>;
pub type PrecisionMap64 = optimizer::PrecisionMap<f64>;
pub type Optimum64 = optimizer::Optimum<f64>;
