//! Fisher information and precision bounds for the transmission measurement.
//!
//! A transmitted/reflected dichotomy carries classical Fisher information
//! F = T'(B)² / (T(1-T)) about the field. Imperfect detectors of efficiency η
//! modify this to F⁽ᴵ⁾ = ηF when both ports are monitored and to
//! F⁽ᴵᴵ⁾ = η T'²/(T(1-ηT)) when only transmitted atoms are counted. The
//! single-shot precision is ΔB = 1/√F; repetition improves it by √(NM).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::real::Real;
use crate::scattering::{
    Collision, ResonanceParams, TransmissionCurve, TrapGeometry, CIR_CONSTANT,
};
use crate::units::{GAUSS_TO_TESLA, HZ_PER_NANOKELVIN};

/// Which ports the detectors watch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionScheme {
    /// Transmitted and reflected atoms are both registered (scheme I).
    BothPorts,
    /// Only transmitted atoms are registered; a missing count is ambiguous
    /// between reflection and detector loss (scheme II).
    TransmittedOnly,
}

/// Detector efficiency and measurement scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorModel<F> {
    /// Efficiency η ∈ [0, 1].
    pub eta: F,
    pub scheme: DetectionScheme,
}

impl<F: Real> DetectorModel<F> {
    pub fn new(eta: F, scheme: DetectionScheme) -> Result<Self> {
        if !(eta >= F::zero() && eta <= F::one()) {
            return Err(Error::invalid("eta", "efficiency must be in [0, 1]"));
        }
        Ok(DetectorModel { eta, scheme })
    }

    /// Perfect detectors on both ports.
    pub fn ideal() -> Self {
        DetectorModel {
            eta: F::one(),
            scheme: DetectionScheme::BothPorts,
        }
    }
}

/// Measurement budget: tubes, repetitions, timing, momentum spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorBudget<F> {
    /// Number of parallel waveguides N.
    pub n_tubes: u64,
    /// Repetitions per tube M (ignored when `total_time_s` is set).
    pub m_reps: u64,
    /// Duration of a single collision-and-detection event τ (s).
    pub tau_s: F,
    /// Optional total integration time t (s); then M = floor(t/τ).
    #[serde(default)]
    pub total_time_s: Option<F>,
    /// Longitudinal momentum spread σ_p (ā⁻¹).
    pub sigma_p: F,
}

impl<F: Real> SensorBudget<F> {
    pub fn new(
        n_tubes: u64,
        m_reps: u64,
        tau_s: F,
        total_time_s: Option<F>,
        sigma_p: F,
    ) -> Result<Self> {
        if n_tubes < 1 {
            return Err(Error::invalid("n_tubes", "need at least one tube"));
        }
        if m_reps < 1 {
            return Err(Error::invalid("m_reps", "need at least one repetition"));
        }
        if !(tau_s > F::zero()) {
            return Err(Error::invalid("tau_s", "event time must be > 0"));
        }
        if !(sigma_p >= F::zero()) {
            return Err(Error::invalid("sigma_p", "momentum spread must be >= 0"));
        }
        if let Some(t) = total_time_s {
            if !(t >= tau_s) {
                return Err(Error::invalid(
                    "total_time_s",
                    "total time shorter than one event",
                ));
            }
        }
        Ok(SensorBudget {
            n_tubes,
            m_reps,
            tau_s,
            total_time_s,
            sigma_p,
        })
    }

    /// Repetitions per tube, derived from the total time when given.
    pub fn effective_m(&self) -> u64 {
        match self.total_time_s {
            Some(t) => (t / self.tau_s).floor().to_f64_lossy() as u64,
            None => self.m_reps,
        }
    }
}

/// Classical Fisher information of the two-outcome statistics, written as the
/// explicit sum over outcomes s = ±1: F = Σ_s (∂P(s)/∂B)² / P(s) with
/// P(+1) = T, P(-1) = 1 - T and ∂P(±1)/∂B = ±T'.
///
/// Algebraically identical to `T'²/(T(1-T))`; kept as an independent route for
/// cross-checking. Only meaningful at interior transmissions 0 < T < 1.
pub fn fisher_information_two_outcome<F: Real>(p_transmit: F, p_reflect: F, t_prime: F) -> F {
    let tp2 = t_prime * t_prime;
    tp2 / p_transmit + tp2 / p_reflect
}

/// Classical Fisher information about B (per atom), detector model included.
///
/// At an exact transmission extremum the raw expression is 0/0; the finite
/// limit is obtained from the quadratic expansion T ≈ T₀ ± α(B-B₀)², giving
/// F → η·2|T''|.
pub fn fisher_information<F: Real>(
    b: F,
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
    detector: &DetectorModel<F>,
) -> Result<F> {
    let curve = TransmissionCurve::new(coll, params, geom)?;
    fisher_on_curve(&curve, b, detector, params.dmu.is_some())
}

/// Curve-level Fisher information; `fd_derivative` selects the central
/// finite-difference derivative path (used when the δμ energy shift is on).
pub(crate) fn fisher_on_curve<F: Real>(
    curve: &TransmissionCurve<F>,
    b: F,
    detector: &DetectorModel<F>,
    fd_derivative: bool,
) -> Result<F> {
    let t = curve.transmission(b);
    if !(t >= F::zero() && t <= F::one()) {
        return Err(Error::TransmissionOutOfRange {
            t: t.to_f64_lossy(),
        });
    }
    let one_minus_t = curve.transmission_complement(b);
    let eta = detector.eta;
    // loss-aware complement 1 - ηT, assembled without cancellation
    let miss = match detector.scheme {
        DetectionScheme::BothPorts => one_minus_t,
        DetectionScheme::TransmittedOnly => (F::one() - eta) + eta * one_minus_t,
    };
    let denom = t * miss;
    if denom == F::zero() {
        // Exact extremum (T = 0 at the CIR, or T = 1 at the zero crossing with
        // both ports watched): F -> eta * 2|T''|.
        let tpp = curvature(curve, b);
        return Ok(eta * F::from_f64_const(2.0) * tpp.abs());
    }
    let tp = if fd_derivative {
        let step = F::from_f64_const(1e-6) * curve.resonance_width().abs();
        fd_slope(curve, b, step)?
    } else {
        curve.transmission_derivative(b)
    };
    Ok(eta * tp * tp / denom)
}

/// Second derivative of T via a central stencil with an adaptive step.
fn curvature<F: Real>(curve: &TransmissionCurve<F>, b: F) -> F {
    let t0 = curve.transmission(b);
    let resolvable = F::from_f64_const(1e4) * F::epsilon();
    let h_max = F::from_f64_const(0.04) * curve.resonance_width().abs();
    let mut h = F::from_f64_const(1e-3) * curve.resonance_width().abs();
    loop {
        let d1 = curve.transmission(b + h) - t0;
        let d2 = curve.transmission(b - h) - t0;
        if d1.abs().max(d2.abs()) > resolvable || h >= h_max {
            return (d1 + d2) / (h * h);
        }
        h = h + h;
    }
}

fn fd_slope<F: Real>(curve: &TransmissionCurve<F>, b: F, step: F) -> Result<F> {
    if !(step > F::zero()) || b + step == b {
        return Err(Error::StepUnderflow {
            b: b.to_f64_lossy(),
        });
    }
    let two = F::from_f64_const(2.0);
    Ok((curve.transmission(b + step) - curve.transmission(b - step)) / (two * step))
}

/// dT/dB. Analytic chain rule for the zero-energy profile; central finite
/// differences once the δμ pole shift is modeled.
pub fn transmission_derivative<F: Real>(
    b: F,
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> Result<F> {
    let curve = TransmissionCurve::new(coll, params, geom)?;
    match params.dmu {
        None => Ok(curve.transmission_derivative(b)),
        Some(_) => {
            let step = F::from_f64_const(1e-6) * params.delta.abs();
            fd_slope(&curve, b, step)
        }
    }
}

/// Central-difference dT/dB with an explicit step; the independent route used
/// to validate the analytic derivative.
pub fn transmission_derivative_fd<F: Real>(
    b: F,
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
    step: F,
) -> Result<F> {
    let curve = TransmissionCurve::new(coll, params, geom)?;
    fd_slope(&curve, b, step)
}

/// Single-shot (N = M = 1) field uncertainty ΔB = 1/√F in Gauss.
///
/// Returns +∞ where the Fisher information vanishes.
pub fn single_shot_precision<F: Real>(
    b: F,
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
    detector: &DetectorModel<F>,
) -> Result<F> {
    let f = fisher_information(b, coll, params, geom, detector)?;
    Ok(precision_from_fisher(f))
}

pub(crate) fn precision_from_fisher<F: Real>(f: F) -> F {
    if f == F::zero() {
        F::infinity()
    } else {
        f.sqrt().recip()
    }
}

/// Leading-order ΔB when operating at the confinement-induced resonance:
/// a_bg Δ (1/(p d²) + C² p/4) with C = C(0).
pub fn delta_b_cir_asymptotic<F: Real>(
    p: F,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> Result<F> {
    if !(p > F::zero()) {
        return Err(Error::invalid("p", "momentum must be > 0"));
    }
    let c = F::from_f64_const(CIR_CONSTANT);
    let quarter = F::from_f64_const(0.25);
    let d2 = geom.d * geom.d;
    let shape = (p * d2).recip() + quarter * c * c * p;
    Ok((params.a_bg * params.delta).abs() * shape)
}

/// Momentum minimizing [`delta_b_cir_asymptotic`]: p* = 2/(C d), at which the
/// bound evaluates to a_bg Δ C / d.
pub fn cir_asymptotic_optimum<F: Real>(
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> (F, F) {
    let c = F::from_f64_const(CIR_CONSTANT);
    let p_star = F::from_f64_const(2.0) / (c * geom.d);
    let min = (params.a_bg * params.delta).abs() * c / geom.d;
    (p_star, min)
}

/// Leading-order ΔB when operating at the unit-transmission peak:
/// Δ p d² / (4 a_bg).
pub fn delta_b_peak_asymptotic<F: Real>(
    p: F,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> Result<F> {
    if !(p > F::zero()) {
        return Err(Error::invalid("p", "momentum must be > 0"));
    }
    if params.a_bg == F::zero() {
        return Err(Error::invalid("a_bg", "peak bound undefined at a_bg = 0"));
    }
    let quarter = F::from_f64_const(0.25);
    Ok((params.delta * p * geom.d * geom.d / params.a_bg).abs() * quarter)
}

/// Ensemble precision ΔB/√(N·M) after N tubes and M repetitions.
pub fn ensemble_precision<F: Real>(db_single: F, budget: &SensorBudget<F>) -> Result<F> {
    if !(db_single > F::zero()) {
        return Err(Error::invalid("db_single", "single-shot ΔB must be > 0"));
    }
    let nm = F::from_u64(budget.n_tubes).unwrap() * F::from_u64(budget.effective_m()).unwrap();
    Ok(db_single / nm.sqrt())
}

/// Sensitivity ΔB·√(τ/N) converted to T/√Hz.
pub fn sensitivity_per_root_hz<F: Real>(db_single: F, budget: &SensorBudget<F>) -> Result<F> {
    if !(db_single > F::zero()) {
        return Err(Error::invalid("db_single", "single-shot ΔB must be > 0"));
    }
    let n = F::from_u64(budget.n_tubes).unwrap();
    Ok(db_single * (budget.tau_s / n).sqrt() * F::from_f64_const(GAUSS_TO_TESLA))
}

/// Transmission averaged over a Gaussian longitudinal momentum distribution
/// truncated to the single-mode window (0, 2/d).
///
/// σ_p = 0 degenerates to the point transmission. Errors out when the window
/// keeps less than 99% of the distribution mass.
pub fn averaged_transmission<F: Real>(
    b: F,
    p_mean: F,
    sigma_p: F,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
) -> Result<F> {
    if !(sigma_p >= F::zero()) {
        return Err(Error::invalid("sigma_p", "momentum spread must be >= 0"));
    }
    if sigma_p == F::zero() {
        let coll = Collision::new(p_mean, geom)?;
        return crate::scattering::transmission(b, &coll, params, geom);
    }
    let two = F::from_f64_const(2.0);
    let eight = F::from_f64_const(8.0);
    let channel = two / geom.d;
    let margin = F::from_f64_const(1e-12) * channel;
    let lo = (p_mean - eight * sigma_p).max(margin);
    let hi = (p_mean + eight * sigma_p).min(channel - margin);

    let full_mass = sigma_p * (two * F::PI()).sqrt();
    if !(lo < hi) {
        return Err(Error::TruncatedMass { mass: 0.0 });
    }

    let weight = |p: F| {
        let u = (p - p_mean) / sigma_p;
        (-u * u / two).exp()
    };
    let weighted = |p: F| {
        let coll = Collision::new(p, geom).expect("p clipped inside the single-mode window");
        let curve =
            TransmissionCurve::new(&coll, params, geom).expect("positive p inside the window");
        weight(p) * curve.transmission(b)
    };

    let tol = F::from_f64_const(1e-9) * full_mass;
    let norm = adaptive_simpson(&weight, lo, hi, tol)?;
    let mass = norm / full_mass;
    if mass < F::from_f64_const(0.99) {
        return Err(Error::TruncatedMass {
            mass: mass.to_f64_lossy(),
        });
    }
    let num = adaptive_simpson(&weighted, lo, hi, tol)?;
    Ok(num / norm)
}

/// Field uncertainty induced by collision-energy spread through the
/// differential magnetic moment: σ_B = σ_E/δμ.
///
/// `sigma_e_nk` is the energy distribution width as a temperature in nK,
/// `dmu_hz_per_gauss` the differential moment in Hz/G (several MHz/G is
/// typical); the fixed conversion 1 nK ≡ 20.8366 Hz links the two.
pub fn resonance_jitter<F: Real>(sigma_e_nk: F, dmu_hz_per_gauss: F) -> Result<F> {
    if !(dmu_hz_per_gauss > F::zero()) {
        return Err(Error::invalid("dmu", "differential moment must be > 0"));
    }
    if !(sigma_e_nk >= F::zero()) {
        return Err(Error::invalid("sigma_e_nk", "energy spread must be >= 0"));
    }
    Ok(sigma_e_nk * F::from_f64_const(HZ_PER_NANOKELVIN) / dmu_hz_per_gauss)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ResonanceParams<f64>, TrapGeometry<f64>, Collision<f64>) {
        let params: ResonanceParams<f64> = ResonanceParams::new(9.7, 0.15, 10.0, None).unwrap();
        let geom = TrapGeometry::equal_masses(20.0).unwrap();
        let coll = Collision::new(0.01, &geom).unwrap();
        (params, geom, coll)
    }

    #[test]
    fn two_outcome_algebra() {
        // T = 1/2, T' = 1: T(1-T) = 1/4 forces F = 4.
        assert_eq!(fisher_information_two_outcome(0.5, 0.5, 1.0), 4.0);
    }

    #[test]
    fn eta_scaling_is_exact() {
        let (params, geom, coll) = setup();
        let b = 10.07;
        let ideal = DetectorModel::ideal();
        let lossy = DetectorModel::new(0.5, DetectionScheme::BothPorts).unwrap();
        let f1 = fisher_information(b, &coll, &params, &geom, &ideal).unwrap();
        let f2 = fisher_information(b, &coll, &params, &geom, &lossy).unwrap();
        assert_eq!(f2, 0.5 * f1);
    }

    #[test]
    fn transmitted_only_matches_at_unit_efficiency() {
        let (params, geom, coll) = setup();
        let both = DetectorModel::new(1.0, DetectionScheme::BothPorts).unwrap();
        let trans = DetectorModel::new(1.0, DetectionScheme::TransmittedOnly).unwrap();
        for &b in &[9.8, 10.05, 10.2, 10.4] {
            let f1 = fisher_information(b, &coll, &params, &geom, &both).unwrap();
            let f2 = fisher_information(b, &coll, &params, &geom, &trans).unwrap();
            assert_eq!(f1, f2, "schemes must agree at eta = 1 (B = {b})");
        }
    }

    /// Dyadic width and position so that b_res + delta is exact in binary and
    /// the peak field hits T = 1, T' = 0 bit-exactly.
    fn dyadic() -> (ResonanceParams<f64>, TrapGeometry<f64>, Collision<f64>, f64) {
        let params = ResonanceParams::new(9.7, 0.5, 10.0, None).unwrap();
        let geom = TrapGeometry::equal_masses(20.0).unwrap();
        let coll = Collision::new(0.01, &geom).unwrap();
        (params, geom, coll, 10.5)
    }

    #[test]
    fn derivative_zero_at_extrema() {
        let (params, geom, coll, peak) = dyadic();
        let tp = transmission_derivative(peak, &coll, &params, &geom).unwrap();
        assert_eq!(tp, 0.0);
        // generic width: vanishing up to rounding of b_res + delta
        let (p2, g2, c2) = setup();
        let tp2 = transmission_derivative(p2.b_res + p2.delta, &c2, &p2, &g2).unwrap();
        assert!(tp2.abs() < 1e-9, "T' near peak = {tp2}");
    }

    #[test]
    fn finite_fisher_at_peak() {
        let (params, geom, coll, peak) = dyadic();
        let det = DetectorModel::ideal();
        let f = fisher_information(peak, &coll, &params, &geom, &det).unwrap();
        // quadratic-expansion limit: F = 16 (mf a_bg)^2 / ((p d)^2 d^2 delta^2)
        let mf_abg = geom.mass_factor * params.a_bg;
        let pd = coll.p * geom.d;
        let expected =
            16.0 * mf_abg * mf_abg / (pd * pd * geom.d * geom.d * params.delta * params.delta);
        assert!(
            (f / expected - 1.0).abs() < 1e-3,
            "F at peak = {f}, limit = {expected}"
        );
        let db = single_shot_precision(peak, &coll, &params, &geom, &det).unwrap();
        assert!(db.is_finite() && db > 0.0);
    }

    #[test]
    fn transmitted_only_blind_at_peak_with_loss() {
        let (params, geom, coll, peak) = dyadic();
        let det = DetectorModel::new(0.6, DetectionScheme::TransmittedOnly).unwrap();
        let f = fisher_information(peak, &coll, &params, &geom, &det).unwrap();
        assert_eq!(f, 0.0);
        let db = single_shot_precision(peak, &coll, &params, &geom, &det).unwrap();
        assert!(db.is_infinite());
    }

    #[test]
    fn cir_asymptote_hand_value() {
        let params: ResonanceParams<f64> = ResonanceParams::new(0.2, 0.15, 10.0, None).unwrap();
        let geom = TrapGeometry::equal_masses(20.0).unwrap();
        let db = delta_b_cir_asymptotic(0.01, &params, &geom).unwrap();
        assert!((db - 7.6599e-3).abs() < 1e-6, "db = {db}");
        // linear in the width
        let wide: ResonanceParams<f64> = ResonanceParams::new(0.2, 0.30, 10.0, None).unwrap();
        let db2 = delta_b_cir_asymptotic(0.01, &wide, &geom).unwrap();
        assert!((db2 / db - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cir_asymptote_optimum() {
        let params: ResonanceParams<f64> = ResonanceParams::new(0.2, 0.15, 10.0, None).unwrap();
        let geom = TrapGeometry::equal_masses(20.0).unwrap();
        let (p_star, db_min) = cir_asymptotic_optimum(&params, &geom);
        assert!((p_star - 2.0 / (CIR_CONSTANT * 20.0)).abs() < 1e-15);
        assert!((db_min - 0.2 * 0.15 * CIR_CONSTANT / 20.0).abs() < 1e-15);
        // consistency with the curve itself
        let at_star = delta_b_cir_asymptotic(p_star, &params, &geom).unwrap();
        assert!((at_star - db_min).abs() < 1e-15 * db_min.abs().max(1.0));
    }

    #[test]
    fn peak_asymptote_hand_value() {
        let params: ResonanceParams<f64> = ResonanceParams::new(9.7, 0.15, 10.0, None).unwrap();
        let geom = TrapGeometry::equal_masses(20.0).unwrap();
        let db = delta_b_peak_asymptotic(0.01, &params, &geom).unwrap();
        assert!((db - 0.6 / 38.8).abs() < 1e-12, "db = {db}");
        // halving a_bg doubles the bound
        let halved: ResonanceParams<f64> = ResonanceParams::new(4.85, 0.15, 10.0, None).unwrap();
        let db2 = delta_b_peak_asymptotic(0.01, &halved, &geom).unwrap();
        assert!((db2 / db - 2.0).abs() < 1e-12);
        // smaller p is better
        let db_low = delta_b_peak_asymptotic(0.001, &params, &geom).unwrap();
        assert!(db_low < db);
    }

    #[test]
    fn ensemble_and_sensitivity() {
        let budget = SensorBudget::<f64>::new(100, 100, 0.03, None, 0.0).unwrap();
        let single = SensorBudget::<f64>::new(1, 1, 0.03, None, 0.0).unwrap();
        assert_eq!(ensemble_precision(1e-3, &single).unwrap(), 1e-3);
        let e = ensemble_precision(1e-3, &budget).unwrap();
        assert!((e - 1e-5).abs() < 1e-20);

        // 1e-5 G, tau 30 ms, N = 100 -> about 17 pT/rtHz
        let s = sensitivity_per_root_hz(1e-5, &budget).unwrap();
        assert!((s - 1.7320508e-11).abs() < 1e-15, "s = {s}");
        let double_tau = SensorBudget::new(100, 100, 0.06, None, 0.0).unwrap();
        let s2 = sensitivity_per_root_hz(1e-5, &double_tau).unwrap();
        assert!((s2 / s - 2f64.sqrt()).abs() < 1e-12);
        let quad_n = SensorBudget::new(400, 100, 0.03, None, 0.0).unwrap();
        let s4 = sensitivity_per_root_hz(1e-5, &quad_n).unwrap();
        assert!((s4 / s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn budget_from_total_time() {
        let b = SensorBudget::<f64>::new(10, 1, 0.03, Some(3.0), 0.0).unwrap();
        assert_eq!(b.effective_m(), 100);
        assert!(SensorBudget::new(10, 1, 0.03, Some(0.01), 0.0).is_err());
        assert!(SensorBudget::new(0, 1, 0.03, None, 0.0).is_err());
    }

    #[test]
    fn averaged_transmission_delta_limit() {
        let (params, geom, _) = setup();
        let b = 10.05;
        let point = averaged_transmission(b, 0.01, 0.0, &params, &geom).unwrap();
        let coll = Collision::new(0.01, &geom).unwrap();
        let direct = crate::scattering::transmission(b, &coll, &params, &geom).unwrap();
        assert_eq!(point, direct);
    }

    #[test]
    fn averaged_transmission_fills_the_dip() {
        // Sharp dip: the momentum spread moves the CIR through C(p), so the
        // averaged dip floor lifts well above zero.
        let params: ResonanceParams<f64> = ResonanceParams::new(0.01, 0.15, 10.0, None).unwrap();
        let geom = TrapGeometry::equal_masses(20.0).unwrap();
        let p_mean = 0.06;
        let coll = Collision::new(p_mean, &geom).unwrap();
        let curve = TransmissionCurve::new(&coll, &params, &geom).unwrap();
        // CIR root of the linear residual
        let s0 = curve.cir_residual_linear(9.9);
        let s1 = curve.cir_residual_linear(10.1);
        let b_star = 9.9 - s0 * 0.2 / (s1 - s0);
        assert!(curve.transmission(b_star) < 1e-12);
        let filled = averaged_transmission(b_star, p_mean, 0.012, &params, &geom).unwrap();
        assert!(filled > 1e-4, "dip should fill in: {filled}");
        assert!(filled < 1.0);
    }

    #[test]
    fn averaged_transmission_rejects_heavy_truncation() {
        let (params, geom, _) = setup();
        // mean far outside the single-mode window
        let err = averaged_transmission(10.0, 0.3, 0.01, &params, &geom);
        assert!(matches!(err, Err(Error::TruncatedMass { .. })));
    }

    #[test]
    fn jitter_order_of_magnitude() {
        let s = resonance_jitter(1.0f64, 2e6).unwrap();
        assert!((s - 1.04183e-5).abs() < 1e-9, "sigma_B = {s}");
        assert_eq!(resonance_jitter(0.0, 2e6).unwrap(), 0.0);
        let s2 = resonance_jitter(2.0, 2e6).unwrap();
        assert!((s2 / s - 2.0).abs() < 1e-12);
        assert!(resonance_jitter(1.0, 0.0).is_err());
    }
}
