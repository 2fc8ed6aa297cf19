//! Validates the Euler-Maclaurin Hurwitz zeta against a slow direct-summation
//! oracle that shares no code or constants with the implementation.

use cirsensor_core::scattering::{confinement_factor, TrapGeometry};
use cirsensor_core::special::hurwitz_zeta_half;
use rand::{Rng, SeedableRng};

/// Direct summation oracle: apply the recurrence
/// zeta_H(s, a) = sum_{n<K} (a+n)^{-s} + zeta_H(s, a+K) with K = 2^20 and
/// close the tail with the first terms of the large-argument expansion
/// -2 sqrt(q) + q^{-1/2}/2 + q^{-3/2}/24. Kahan compensation keeps the million
/// additions at the 1e-13 level.
fn zeta_half_oracle(a: f64) -> f64 {
    const K: usize = 1 << 20;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    // ascending magnitude: largest n first gives smallest terms first
    for n in (0..K).rev() {
        let term = 1.0 / (a + n as f64).sqrt();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let q = a + K as f64;
    let sq = q.sqrt();
    sum - 2.0 * sq + 0.5 / sq + 1.0 / (24.0 * q * sq)
}

#[test]
fn oracle_agrees_at_one() {
    // zeta(1/2) from the oracle itself, then the implementation against it
    let oracle = zeta_half_oracle(1.0);
    assert!(
        (oracle - (-1.4603545088095868)).abs() < 1e-12,
        "oracle drifted: {oracle}"
    );
    let em = hurwitz_zeta_half(1.0f64).unwrap();
    assert!((em - oracle).abs() < 1e-12, "em = {em}, oracle = {oracle}");
}

#[test]
fn cir_constant_against_oracle() {
    let geom = TrapGeometry::equal_masses(20.0f64).unwrap();
    let c = confinement_factor(0.0, &geom).unwrap();
    let oracle = -zeta_half_oracle(1.0);
    assert!((c - oracle).abs() < 1e-10, "C(0) = {c} vs oracle {oracle}");
}

#[test]
fn euler_maclaurin_matches_oracle_on_unit_interval() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let a: f64 = rng.gen_range(1e-6..=1.0);
        let em = hurwitz_zeta_half(a).unwrap();
        let oracle = zeta_half_oracle(a);
        assert!(
            (em - oracle).abs() < 1e-12 * (1.0 + oracle.abs()),
            "a = {a}: em = {em}, oracle = {oracle}"
        );
    }
}

#[test]
fn recurrence_fuzz_thousand_cases() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..1000 {
        let a: f64 = rng.gen_range(1e-4..1.0);
        let lhs = hurwitz_zeta_half(a).unwrap() - hurwitz_zeta_half(a + 1.0).unwrap();
        let rhs = 1.0 / a.sqrt();
        assert!(
            (lhs - rhs).abs() <= 1e-12 * rhs.max(1.0),
            "recurrence violated at a = {a}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn half_point_identity_against_oracle() {
    // zeta_H(1/2, 1/2) = (sqrt(2) - 1) zeta(1/2)
    let lhs = hurwitz_zeta_half(0.5f64).unwrap();
    let rhs = (2.0f64.sqrt() - 1.0) * zeta_half_oracle(1.0);
    assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
}
