//! Natural-unit system and laboratory conversions.
//!
//! The core model works in dimensionless units: lengths in the van der Waals
//! mean length ā, momenta in ā⁻¹, magnetic field in Gauss, ħ = m = 1. The
//! associated energy unit is E₀ = ħ²/(m ā²); this module converts it to an
//! equivalent temperature so longitudinal momenta can be quoted in nK.
//! Conversions happen only at I/O boundaries; nothing inside the scattering or
//! metrology code touches laboratory units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Reduced Planck constant (J s).
const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant (J/K).
const K_B: f64 = 1.380649e-23;
/// Unified atomic mass unit (kg).
const AMU: f64 = 1.66053906660e-27;
/// Bohr radius (m).
const BOHR: f64 = 5.29177210903e-11;

/// k_B/h to six significant figures: 1 nK of thermal energy in Hz.
pub const HZ_PER_NANOKELVIN: f64 = 20.8366;
/// 1 Gauss in Tesla.
pub const GAUSS_TO_TESLA: f64 = 1e-4;

/// Atom species entering the natural-unit calibration.
///
/// `abar_bohr` is the van der Waals mean length ā in Bohr radii; together with
/// the mass it fixes the energy unit ħ²/(m ā²) and hence the momentum ↔
/// temperature map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Species<F> {
    /// Atomic mass in amu.
    pub mass_amu: F,
    /// van der Waals mean length ā in Bohr radii.
    pub abar_bohr: F,
}

impl<F: Real> Species<F> {
    pub fn new(mass_amu: F, abar_bohr: F) -> Result<Self> {
        if !(mass_amu > F::zero()) {
            return Err(Error::invalid("mass_amu", "must be > 0"));
        }
        if !(abar_bohr > F::zero()) {
            return Err(Error::invalid("abar_bohr", "must be > 0"));
        }
        Ok(Species {
            mass_amu,
            abar_bohr,
        })
    }

    /// Calibration sample shipped with the bundled configs: ā = 100 a₀ and the
    /// mass chosen so that p = 0.01 ā⁻¹ corresponds to exactly 15 nK. No real
    /// species is implied; replace with measured data for a concrete atom.
    pub fn sample() -> Self {
        Species {
            mass_amu: F::from_f64_const(57.7426113931855),
            abar_bohr: F::from_f64_const(100.0),
        }
    }
}

/// Scale factors of the natural-unit system for one species.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem<F> {
    /// ā in meters.
    pub length_m: F,
    /// ā⁻¹ in 1/m.
    pub momentum_per_m: F,
    /// Field unit (Gauss expressed in Gauss; fields are carried in G as-is).
    pub field_gauss: F,
    /// Natural energy unit E₀ = ħ²/(m ā²) as a temperature in nK.
    pub energy_nk: F,
    /// Natural energy unit in Hz (for differential-magnetic-moment input).
    pub energy_hz: F,
}

impl<F: Real> UnitSystem<F> {
    /// Derive the unit system from species data.
    ///
    /// The intermediate arithmetic runs in `f64` because the SI constants
    /// (ħ² ≈ 1e-68) underflow narrower types; only the final, O(1)-ish scale
    /// factors are converted to `F`.
    pub fn for_species(species: &Species<F>) -> Result<Self> {
        let mass = species.mass_amu.to_f64_lossy() * AMU;
        let abar = species.abar_bohr.to_f64_lossy() * BOHR;
        if !(mass > 0.0 && abar > 0.0) {
            return Err(Error::invalid("species", "mass and abar must be > 0"));
        }
        let energy_joule = HBAR * HBAR / (mass * abar * abar);
        let energy_nk = energy_joule / K_B * 1e9;
        let energy_hz = energy_joule / (2.0 * std::f64::consts::PI * HBAR);
        if !(energy_nk > 0.0 && energy_nk.is_finite()) {
            return Err(Error::invalid("species", "degenerate energy scale"));
        }
        Ok(UnitSystem {
            length_m: F::from_f64_const(abar),
            momentum_per_m: F::from_f64_const(1.0 / abar),
            field_gauss: F::one(),
            energy_nk: F::from_f64_const(energy_nk),
            energy_hz: F::from_f64_const(energy_hz),
        })
    }

    /// Kinetic energy ħ²p²/(2m) of longitudinal momentum `p` (in ā⁻¹),
    /// expressed as a temperature in nK.
    pub fn momentum_to_temperature(&self, p: F) -> Result<F> {
        if p < F::zero() {
            return Err(Error::invalid("p", "momentum must be >= 0"));
        }
        Ok(p * p / F::from_f64_const(2.0) * self.energy_nk)
    }

    /// Inverse of [`momentum_to_temperature`](Self::momentum_to_temperature).
    pub fn temperature_to_momentum(&self, t_nk: F) -> Result<F> {
        if t_nk < F::zero() {
            return Err(Error::invalid("t_nk", "temperature must be >= 0"));
        }
        Ok((F::from_f64_const(2.0) * t_nk / self.energy_nk).sqrt())
    }

    /// Differential magnetic moment given in MHz/G, converted to natural
    /// energy units per Gauss.
    pub fn dmu_from_mhz_per_gauss(&self, dmu_mhz: F) -> F {
        dmu_mhz * F::from_f64_const(1e6) / self.energy_hz
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys() -> UnitSystem<f64> {
        UnitSystem::for_species(&Species::sample()).unwrap()
    }

    #[test]
    fn zero_momentum_is_zero_temperature() {
        assert_eq!(sys().momentum_to_temperature(0.0).unwrap(), 0.0);
        assert_eq!(sys().temperature_to_momentum(0.0).unwrap(), 0.0);
    }

    #[test]
    fn calibration_anchor() {
        // The sample species maps p = 0.01 to 15 nK by construction; scaling
        // to p = 0.001 is exactly quadratic.
        let t = sys().momentum_to_temperature(0.01).unwrap();
        assert!((t - 15.0).abs() < 1e-9 * 15.0, "t = {t}");
        let t_low = sys().momentum_to_temperature(0.001).unwrap();
        assert!((t_low - 0.15).abs() < 1e-9 * 0.15, "t = {t_low}");
    }

    #[test]
    fn inverse_anchor() {
        let p = sys().temperature_to_momentum(15.0).unwrap();
        assert!((p - 0.01).abs() < 1e-12);
        let p10 = sys().temperature_to_momentum(10.0).unwrap();
        assert!((p10 - 0.008164965809277).abs() < 1e-12, "p = {p10}");
    }

    #[test]
    fn round_trip_identity() {
        let s = sys();
        let mut p = 1e-6;
        while p <= 1.0 {
            let back = s
                .temperature_to_momentum(s.momentum_to_temperature(p).unwrap())
                .unwrap();
            assert!((back - p).abs() <= 1e-12 * p, "p = {p}, back = {back}");
            p *= 3.7;
        }
    }

    #[test]
    fn exactly_quadratic() {
        let s = sys();
        for &p in &[1e-5, 3e-3, 0.02, 0.7] {
            let f1 = s.momentum_to_temperature(p).unwrap();
            let f2 = s.momentum_to_temperature(2.0 * p).unwrap();
            assert_eq!(f2, 4.0 * f1);
        }
    }

    #[test]
    fn negative_inputs_rejected() {
        assert!(sys().momentum_to_temperature(-1e-9).is_err());
        assert!(sys().temperature_to_momentum(-0.1).is_err());
    }

    #[test]
    fn jitter_scale_constant() {
        // 1 nK at delta_mu = 2 MHz/G is about 1e-5 G; the constant itself.
        assert!((HZ_PER_NANOKELVIN - 20.8366).abs() < 1e-10);
    }
}
