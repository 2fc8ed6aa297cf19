//! Field-dependent scattering and quasi-1D transmission.
//!
//! A Feshbach resonance tunes the 3D scattering length
//! ã(B) = a_bg (1 - Δ/(B - B_res)); in a transverse harmonic waveguide of
//! oscillator length d the effective 1D phase shift obeys
//!
//! p tan δ_1D = -(2/d) (d/a - C)⁻¹,      a = (m/μ) ã,
//!
//! with the confinement factor C = -ζ_H(1/2, 1 - p²d²/4). Transmission is
//! T = cos² δ_1D. Everything here is evaluated through the reciprocal
//! combination d/a, which is smooth across the pole of a(B), so the only
//! special field values are the zero crossing (T = 1) and the
//! confinement-induced resonance d/a = C (T = 0).
//!
//! Internally T(B) is reduced to two linear functions of B:
//! y = B - B_pole - Δ (distance from the zero crossing) and
//! s = D·(B - B_pole) - C·y with D = d/((m/μ) a_bg), which vanishes exactly at
//! the CIR. Then tan δ_1D = -2y/(p d s) and T = (p d s)²/((p d s)² + 4y²),
//! a form with no spurious infinities anywhere in the single-mode window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special;

pub use crate::special::hurwitz_zeta_half;

/// C(k → 0) = -ζ(1/2), the confinement-induced resonance constant.
pub const CIR_CONSTANT: f64 = -special::ZETA_HALF;

/// Feshbach resonance parameters in natural units (lengths in ā, fields in G).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceParams<F> {
    /// Background scattering length a_bg (ā).
    pub a_bg: F,
    /// Resonance width Δ (G); the zero crossing sits at B_res + Δ.
    pub delta: F,
    /// Resonance position B_res (G).
    pub b_res: F,
    /// Optional differential magnetic moment δμ (natural energy unit per G).
    /// When present, the pole shifts linearly with collision energy:
    /// B_pole = B_res + E/δμ.
    #[serde(default)]
    pub dmu: Option<F>,
}

impl<F: Real> ResonanceParams<F> {
    pub fn new(a_bg: F, delta: F, b_res: F, dmu: Option<F>) -> Result<Self> {
        if !a_bg.is_finite() || a_bg == F::zero() {
            return Err(Error::invalid("a_bg", "must be finite and nonzero"));
        }
        if !delta.is_finite() || delta == F::zero() {
            return Err(Error::invalid("delta", "resonance width must be nonzero"));
        }
        if !b_res.is_finite() {
            return Err(Error::invalid("b_res", "must be finite"));
        }
        if let Some(dmu) = dmu {
            if !(dmu > F::zero()) {
                return Err(Error::invalid("dmu", "differential moment must be > 0"));
            }
        }
        Ok(ResonanceParams {
            a_bg,
            delta,
            b_res,
            dmu,
        })
    }

    /// Effective pole position at collision energy `e_total`: B_res shifted by
    /// E/δμ when the differential magnetic moment is modeled.
    pub fn effective_pole(&self, e_total: F) -> F {
        match self.dmu {
            Some(dmu) => self.b_res + e_total / dmu,
            None => self.b_res,
        }
    }
}

/// Transverse waveguide geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapGeometry<F> {
    /// Transverse oscillator length d (ā).
    pub d: F,
    /// Mass ratio m/μ relating the pair frame to the incoming-atom frame:
    /// 2 for equal masses, → 1 for an infinitely heavy pinned impurity.
    pub mass_factor: F,
}

impl<F: Real> TrapGeometry<F> {
    pub fn new(d: F, mass_factor: F) -> Result<Self> {
        if !(d > F::zero()) || !d.is_finite() {
            return Err(Error::invalid("d", "oscillator length must be > 0"));
        }
        if !(mass_factor >= F::one()) || !mass_factor.is_finite() {
            return Err(Error::invalid("mass_factor", "m/mu must be >= 1"));
        }
        Ok(TrapGeometry { d, mass_factor })
    }

    /// Equal-mass default, d in ā.
    pub fn equal_masses(d: F) -> Result<Self> {
        Self::new(d, F::from_f64_const(2.0))
    }
}

/// A single collision: longitudinal wavenumber plus derived energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Collision<F> {
    /// Longitudinal wavenumber p (ā⁻¹).
    pub p: F,
    /// Total relative-motion energy E = ħω + ħ²p²/2m in natural units
    /// (ħω = 1/d² with ħ = m = 1).
    pub e_total: F,
    /// Total wavenumber k with E = ħ²k²/2μ.
    pub k: F,
}

impl<F: Real> Collision<F> {
    /// Build a collision in the single-mode regime 0 ≤ p·d < 2.
    pub fn new(p: F, geom: &TrapGeometry<F>) -> Result<Self> {
        if !(p >= F::zero()) {
            return Err(Error::invalid("p", "momentum must be >= 0"));
        }
        let pd = p * geom.d;
        if !(pd < F::from_f64_const(2.0)) {
            return Err(Error::AboveSingleMode {
                pd: pd.to_f64_lossy(),
            });
        }
        let half = F::from_f64_const(0.5);
        let e_total = (geom.d * geom.d).recip() + half * p * p;
        let k = (F::from_f64_const(2.0) * e_total / geom.mass_factor).sqrt();
        Ok(Collision { p, e_total, k })
    }
}

/// 3D scattering length ã(B) in ā.
///
/// With `use_dmu` set (and δμ present in `params`) the pole shifts to
/// B_res + e_rel/δμ; otherwise the zero-energy profile is used. Evaluation
/// exactly at the pole yields a signed infinity rather than an error.
pub fn scattering_length_3d<F: Real>(
    b: F,
    params: &ResonanceParams<F>,
    e_rel: F,
    use_dmu: bool,
) -> F {
    let pole = if use_dmu {
        params.effective_pole(e_rel)
    } else {
        params.b_res
    };
    params.a_bg * (F::one() - params.delta / (b - pole))
}

/// Confinement factor C(p) = -ζ_H(1/2, 1 - p²d²/4).
///
/// Rejects momenta at or above the transverse channel opening p·d = 2, where
/// the zeta argument reaches zero and C diverges.
pub fn confinement_factor<F: Real>(p: F, geom: &TrapGeometry<F>) -> Result<F> {
    if !(p >= F::zero()) {
        return Err(Error::invalid("p", "momentum must be >= 0"));
    }
    let pd = p * geom.d;
    let quarter = F::from_f64_const(0.25);
    let arg = F::one() - quarter * pd * pd;
    if !(arg > F::zero()) {
        return Err(Error::AboveSingleMode {
            pd: pd.to_f64_lossy(),
        });
    }
    Ok(-special::hurwitz_zeta_half(arg)?)
}

/// Precomputed transmission profile T(B) at fixed collision parameters.
///
/// Bundles the B-independent pieces (p d, D = d/((m/μ) a_bg), C(p), effective
/// pole) so sweeps, root finding and quadrature do not recompute the zeta
/// function per field point.
#[derive(Debug, Clone, Copy)]
pub struct TransmissionCurve<F> {
    pd: F,
    /// D = d / ((m/μ) a_bg).
    d_over_abg: F,
    /// C(p) for this collision.
    pub c: F,
    /// Effective resonance pole (δμ shift applied when modeled).
    pub pole: F,
    delta: F,
}

impl<F: Real> TransmissionCurve<F> {
    pub fn new(
        coll: &Collision<F>,
        params: &ResonanceParams<F>,
        geom: &TrapGeometry<F>,
    ) -> Result<Self> {
        if !(coll.p > F::zero()) {
            return Err(Error::ZeroMomentum);
        }
        let c = confinement_factor(coll.p, geom)?;
        Ok(TransmissionCurve {
            pd: coll.p * geom.d,
            d_over_abg: geom.d / (geom.mass_factor * params.a_bg),
            c,
            pole: params.effective_pole(coll.e_total),
            delta: params.delta,
        })
    }

    /// (s, y): s vanishes at the CIR, y at the zero crossing.
    #[inline]
    fn s_y(&self, b: F) -> (F, F) {
        let z = b - self.pole;
        let y = z - self.delta;
        (self.d_over_abg * z - self.c * y, y)
    }

    /// d/a(B) - C, the reciprocal-form CIR residual (has a pole at the zero
    /// crossing, which is why root finding uses [`cir_residual_linear`]).
    pub fn cir_residual(&self, b: F) -> F {
        let (s, y) = self.s_y(b);
        s / y
    }

    /// s(B) = (d/a - C)·y: linear in B, zero exactly at the CIR, smooth
    /// through both the pole of a(B) and the zero crossing.
    pub fn cir_residual_linear(&self, b: F) -> F {
        self.s_y(b).0
    }

    /// tan δ_1D(B); ±∞ at the CIR is a legitimate value here.
    pub fn tan_phase_shift(&self, b: F) -> F {
        let (s, y) = self.s_y(b);
        let two = F::from_f64_const(2.0);
        -(two * y) / (self.pd * s)
    }

    /// δ_1D ∈ (-π/2, π/2]; exactly π/2 on the resonant branch d/a = C.
    pub fn phase_shift(&self, b: F) -> F {
        let (s, y) = self.s_y(b);
        if s == F::zero() {
            return F::FRAC_PI_2();
        }
        let two = F::from_f64_const(2.0);
        (-(two * y) / (self.pd * s)).atan()
    }

    /// T(B) = 1/(1 + tan² δ_1D), evaluated in the stable rational form.
    pub fn transmission(&self, b: F) -> F {
        let (s, y) = self.s_y(b);
        let pds = self.pd * s;
        let a = pds * pds;
        let four = F::from_f64_const(4.0);
        a / (a + four * y * y)
    }

    /// 1 - T(B) without cancellation; exactly zero only at the zero crossing.
    pub fn transmission_complement(&self, b: F) -> F {
        let (s, y) = self.s_y(b);
        let pds = self.pd * s;
        let a = pds * pds;
        let four = F::from_f64_const(4.0);
        let yy4 = four * y * y;
        yy4 / (a + yy4)
    }

    /// Resonance width Δ of the underlying profile (G); sets natural field
    /// scales for finite-difference steps.
    pub fn resonance_width(&self) -> F {
        self.delta
    }

    /// Analytic dT/dB via the chain rule through the rational form.
    ///
    /// Valid whenever the pole position does not itself depend on B, which
    /// holds for the zero-energy profile and for the δμ-shifted pole at fixed
    /// collision energy.
    pub fn transmission_derivative(&self, b: F) -> F {
        let (s, y) = self.s_y(b);
        let pds = self.pd * s;
        let a = pds * pds;
        let four = F::from_f64_const(4.0);
        let denom = a + four * y * y;
        let eight = F::from_f64_const(8.0);
        -eight * self.pd * self.pd * self.d_over_abg * self.delta * y * s / (denom * denom)
    }
}

/// Quasi-1D phase shift δ_1D(B) ∈ (-π/2, π/2].
pub fn phase_shift_1d<F: Real>(
    b: F,
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> Result<F> {
    Ok(TransmissionCurve::new(coll, params, geom)?.phase_shift(b))
}

/// Transmission coefficient T(B) ∈ [0, 1].
pub fn transmission<F: Real>(
    b: F,
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> Result<F> {
    Ok(TransmissionCurve::new(coll, params, geom)?.transmission(b))
}

/// Element-wise transmission over a strictly increasing field grid.
pub fn transmission_profile<F: Real>(
    b_grid: &[F],
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> Result<Vec<F>> {
    if b_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("b_grid", "must be strictly increasing"));
    }
    let curve = TransmissionCurve::new(coll, params, geom)?;
    Ok(b_grid.iter().map(|&b| curve.transmission(b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ResonanceParams<f64> {
        ResonanceParams::new(9.7, 0.15, 10.0, None).unwrap()
    }

    fn geom() -> TrapGeometry<f64> {
        TrapGeometry::equal_masses(20.0).unwrap()
    }

    #[test]
    fn constructor_invariants() {
        assert!(ResonanceParams::new(1.0, 0.0, 10.0, None).is_err());
        assert!(ResonanceParams::new(0.0, 0.1, 10.0, None).is_err());
        assert!(ResonanceParams::new(1.0, 0.1, 10.0, Some(-1.0)).is_err());
        assert!(TrapGeometry::new(0.0, 2.0).is_err());
        assert!(TrapGeometry::new(20.0, 0.5).is_err());
        assert!(Collision::new(0.2, &geom()).is_err()); // p*d = 4
        assert!(Collision::new(-1e-3, &geom()).is_err());
    }

    #[test]
    fn collision_energies() {
        let coll = Collision::new(0.01, &geom()).unwrap();
        // hbar*omega = 1/d^2 = 2.5e-3, kinetic = p^2/2 = 5e-5
        assert!((coll.e_total - (2.5e-3 + 5e-5)).abs() < 1e-18);
        // E = k^2 m/(m/mu) / ... -> k = sqrt(2 E / mass_factor) = sqrt(E)
        assert!((coll.k - coll.e_total.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scattering_length_landmarks() {
        let p = params();
        // zero crossing (up to rounding of b_res + delta)
        let a0 = scattering_length_3d(p.b_res + p.delta, &p, 0.0, false);
        assert!(a0.abs() < 1e-13);
        // background limit
        let abg = scattering_length_3d(1e9, &p, 0.0, false);
        assert!((abg - 9.7).abs() < 1e-6);
        // hand evaluation: a_bg (1 - 0.15/0.3) = a_bg/2
        let p2: ResonanceParams<f64> = ResonanceParams::new(9.7, 0.15, 10.0, None).unwrap();
        let a = scattering_length_3d(10.3, &p2, 0.0, false);
        assert!((a - 4.85).abs() < 1e-12, "a = {a}");
        // at the pole: signed infinity, not a crash
        let apole = scattering_length_3d(10.0, &p, 0.0, false);
        assert!(apole.is_infinite());
    }

    #[test]
    fn dmu_shifts_the_pole() {
        let p = ResonanceParams::new(9.7, 0.15, 10.0, Some(0.5)).unwrap();
        let e = 0.01f64;
        assert_eq!(p.effective_pole(e), 10.0 + 0.01 / 0.5);
        let a: f64 = scattering_length_3d(10.02 + 0.15, &p, e, true);
        assert!(a.abs() < 1e-12, "zero crossing follows the pole: {a}");
    }

    #[test]
    fn cir_constant_value() {
        let c = confinement_factor(0.0, &geom()).unwrap();
        assert!((c - 1.4603545088095868).abs() < 1e-12, "C(0) = {c}");
        assert!((c - CIR_CONSTANT).abs() < 5e-15);
    }

    #[test]
    fn confinement_factor_decreases_with_p() {
        let g = geom();
        let c0 = confinement_factor(0.0, &g).unwrap();
        let c1 = confinement_factor(0.01, &g).unwrap();
        let c2 = confinement_factor(0.05, &g).unwrap();
        assert!(c0 > c1 && c1 > c2);
        // p*d = 0.2 lowers C to about 1.447
        assert!((c1 - 1.4472419712802530).abs() < 1e-10, "C = {c1}");
    }

    #[test]
    fn confinement_factor_rejects_channel_opening() {
        assert!(matches!(
            confinement_factor(0.1, &geom()),
            Err(Error::AboveSingleMode { .. })
        ));
    }

    #[test]
    fn phase_shift_chain_example() {
        // d = 20, effective a = 2, p = 0.01:
        // tan delta = -2 / (p d (d/a - C)) with d/a = 10.
        // Arrange effective a = mass_factor * a_bg far from resonance by
        // putting B far away: a -> a_bg, so pick a_bg = 1 with mass factor 2.
        let p = ResonanceParams::new(1.0, 0.15, 10.0, None).unwrap();
        let g = geom();
        let coll = Collision::new(0.01, &g).unwrap();
        let b = 1e8; // a(B) ~ a_bg to 1e-9
        let delta = phase_shift_1d(b, &coll, &p, &g).unwrap();
        assert!(
            (delta - (-0.8636)).abs() < 5e-4,
            "delta_1D = {delta}, expected about -0.863"
        );
        let t = transmission(b, &coll, &p, &g).unwrap();
        assert!((t - 0.4225).abs() < 5e-4, "T = {t}, expected about 0.42");
    }

    #[test]
    fn unit_transmission_at_zero_crossing() {
        let p = params();
        let g = geom();
        for &pp in &[1e-4, 1e-3, 0.01, 0.05] {
            let coll = Collision::new(pp, &g).unwrap();
            let t = transmission(p.b_res + p.delta, &coll, &p, &g).unwrap();
            assert_eq!(t, 1.0, "T at zero crossing must be exactly 1 (p = {pp})");
        }
    }

    #[test]
    fn zero_transmission_on_resonant_branch() {
        let pars = params();
        let g = geom();
        let coll = Collision::new(0.01, &g).unwrap();
        let curve = TransmissionCurve::new(&coll, &pars, &g).unwrap();
        // CIR field from the linear residual: s(B) = 0.
        let s_lo = curve.cir_residual_linear(9.0);
        let s_hi = curve.cir_residual_linear(9.9);
        let b_star = 9.0 - s_lo * (9.9 - 9.0) / (s_hi - s_lo);
        let t = curve.transmission(b_star);
        assert!(t < 1e-20, "T at CIR = {t}");
        assert_eq!(curve.phase_shift(b_star).abs(), std::f64::consts::FRAC_PI_2);
        assert!(curve.tan_phase_shift(b_star).abs() > 1e10);
    }

    #[test]
    fn phase_shift_rejects_zero_momentum() {
        let coll = Collision {
            p: 0.0,
            e_total: 2.5e-3,
            k: 0.05,
        };
        assert!(matches!(
            phase_shift_1d(10.0, &coll, &params(), &geom()),
            Err(Error::ZeroMomentum)
        ));
    }

    #[test]
    fn zero_phase_shift_at_zero_crossing() {
        let g = geom();
        let coll = Collision::new(0.01, &g).unwrap();
        // dyadic width: b_res + delta is exact, so the phase is exactly zero
        let exact: ResonanceParams<f64> = ResonanceParams::new(9.7, 0.5, 10.0, None).unwrap();
        let delta = phase_shift_1d(10.5, &coll, &exact, &g).unwrap();
        assert_eq!(delta, 0.0);
        // generic width: zero up to rounding of b_res + delta
        let p = params();
        let near = phase_shift_1d(p.b_res + p.delta, &coll, &p, &g).unwrap();
        assert!(near.abs() < 1e-12, "delta_1D = {near}");
    }

    #[test]
    fn profile_requires_increasing_grid() {
        let g = geom();
        let coll = Collision::new(0.01, &g).unwrap();
        let err = transmission_profile(&[10.0, 10.0], &coll, &params(), &g);
        assert!(err.is_err());
        let ok = transmission_profile(&[9.9, 10.0, 10.1], &coll, &params(), &g).unwrap();
        assert_eq!(ok.len(), 3);
    }

    #[test]
    fn profile_flat_far_from_resonance() {
        // Small a_bg far from resonance: T close to a constant background.
        let p = ResonanceParams::new(0.2, 0.15, 10.0, None).unwrap();
        let g = geom();
        let coll = Collision::new(0.01, &g).unwrap();
        let grid: Vec<f64> = (0..50).map(|i| 400.0 + i as f64).collect();
        let t = transmission_profile(&grid, &coll, &p, &g).unwrap();
        let spread = t
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        assert!(spread.1 - spread.0 < 1e-4, "spread = {:?}", spread);
    }
}
