//! Feature location and precision optimization over (B, p).
//!
//! The precision landscape ΔB(B, p) has two candidate operating features per
//! resonance: the confinement-induced resonance (T = 0) and the
//! unit-transmission peak at the zero crossing of a(B). This module locates
//! both, scans ΔB over a field/momentum window, and refines the best operating
//! point by coordinate descent with bracketed 1D minimization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrology::{fisher_on_curve, precision_from_fisher, DetectorModel};
use crate::real::Real;
use crate::rootfind::{brent, golden_min};
use crate::scattering::{Collision, ResonanceParams, TransmissionCurve, TrapGeometry};

/// Which transmission feature an optimum is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Confinement-induced resonance, T = 0.
    Cir,
    /// Unit-transmission peak at the scattering-length zero crossing.
    Peak,
}

/// Located field landmarks of one transmission profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapFeatures<F> {
    /// CIR field, when a root exists inside the scanned window.
    pub cir_b: Option<F>,
    /// Zero crossing of the 3D scattering length.
    pub zero_crossing_b: F,
    /// Field of unit transmission (coincides with the zero crossing).
    pub unit_transmission_b: F,
}

/// Dense single-shot precision map over a (B, p) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionMap<F> {
    pub b_grid: Vec<F>,
    pub p_grid: Vec<F>,
    /// Row-major ΔB values, B fastest: entry (ip, ib) at `ip * nb + ib`.
    pub delta_b: Vec<F>,
    pub features: MapFeatures<F>,
}

impl<F: Real> PrecisionMap<F> {
    pub fn at(&self, ip: usize, ib: usize) -> F {
        self.delta_b[ip * self.b_grid.len() + ib]
    }
}

/// Optimal operating point reported by [`minimize_delta_b`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum<F> {
    pub b: F,
    pub p: F,
    pub delta_b: F,
    /// Feature the optimum sits closest to.
    pub branch: Branch,
    /// Set when the optimum landed on the search-window boundary.
    pub on_boundary: bool,
}

/// Field of the scattering-length zero crossing (unit transmission).
///
/// Closed form B_pole + Δ; with the δμ energy shift modeled, the pole itself
/// moves to B_res + E/δμ.
pub fn find_zero_crossing<F: Real>(params: &ResonanceParams<F>, e_total: F) -> F {
    params.effective_pole(e_total) + params.delta
}

/// Locate the confinement-induced resonance d/a(B) = C inside `bracket`.
///
/// Root finding runs on the linear surrogate s(B) = (d/a - C)·(B - B_zero),
/// which shares the root but stays smooth through both the pole of a(B) and
/// the zero crossing. Fails if the surrogate does not change sign.
pub fn find_cir<F: Real>(
    coll: &Collision<F>,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
    bracket: (F, F),
) -> Result<F> {
    let curve = TransmissionCurve::new(coll, params, geom)?;
    let tol = F::from_f64_const(1e-12) * params.delta.abs();
    brent(
        |b| curve.cir_residual_linear(b),
        bracket.0,
        bracket.1,
        tol,
    )
}

/// Uniform grid of `n` points on [lo, hi] (single point collapses to lo).
pub fn linear_grid<F: Real>(lo: F, hi: F, n: usize) -> Vec<F> {
    if n <= 1 {
        return vec![lo];
    }
    let step = (hi - lo) / F::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| lo + step * F::from_usize(i).unwrap())
        .collect()
}

/// Log-spaced grid of `n` points on [lo, hi], lo > 0.
pub fn log_grid<F: Real>(lo: F, hi: F, n: usize) -> Vec<F> {
    if n <= 1 {
        return vec![lo];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / F::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| (llo + step * F::from_usize(i).unwrap()).exp())
        .collect()
}

fn validate_windows<F: Real>(
    geom: &TrapGeometry<F>,
    b_window: (F, F),
    p_window: (F, F),
) -> Result<()> {
    if !(b_window.0 < b_window.1) {
        return Err(Error::invalid("b_window", "need lo < hi"));
    }
    if !(p_window.0 > F::zero() && p_window.0 < p_window.1) {
        return Err(Error::invalid("p_window", "need 0 < lo < hi"));
    }
    if !(p_window.1 * geom.d < F::from_f64_const(2.0)) {
        return Err(Error::AboveSingleMode {
            pd: (p_window.1 * geom.d).to_f64_lossy(),
        });
    }
    Ok(())
}

/// ΔB at one (B, p) point; helper shared by the scan and the refinement.
fn precision_at<F: Real>(
    b: F,
    p: F,
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
    detector: &DetectorModel<F>,
) -> F {
    let eval = || -> Result<F> {
        let coll = Collision::new(p, geom)?;
        let curve = TransmissionCurve::new(&coll, params, geom)?;
        let f = fisher_on_curve(&curve, b, detector, params.dmu.is_some())?;
        Ok(precision_from_fisher(f))
    };
    eval().unwrap_or(F::infinity())
}

/// Minimize single-shot ΔB over a (B, p) window.
///
/// Coarse 256×128 grid scan (p log-spaced) followed by coordinate descent,
/// each coordinate refined by golden-section minimization on an adaptively
/// re-centered bracket, until ΔB stops improving to relative 1e-8.
pub fn minimize_delta_b<F: Real>(
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
    detector: &DetectorModel<F>,
    b_window: (F, F),
    p_window: (F, F),
) -> Result<Optimum<F>> {
    validate_windows(geom, b_window, p_window)?;
    let nb = 256;
    let np = 128;
    let b_grid = linear_grid(b_window.0, b_window.1, nb);
    let p_grid = log_grid(p_window.0, p_window.1, np);

    let mut best = (F::infinity(), b_grid[0], p_grid[0]);
    for &p in &p_grid {
        for &b in &b_grid {
            let db = precision_at(b, p, params, geom, detector);
            if db < best.0 {
                best = (db, b, p);
            }
        }
    }
    let (mut best_db, mut b, mut p) = best;

    let b_cell = (b_window.1 - b_window.0) / F::from_usize(nb - 1).unwrap();
    let lp_cell = (p_window.1.ln() - p_window.0.ln()) / F::from_usize(np - 1).unwrap();
    let two = F::from_f64_const(2.0);
    let rel_tol = F::from_f64_const(1e-8);
    let mut lp = p.ln();
    let (lp_lo, lp_hi) = (p_window.0.ln(), p_window.1.ln());

    for _round in 0..60 {
        let before = best_db;
        let (b_new, db_b) = refine_axis(
            |x| precision_at(x, p, params, geom, detector),
            b,
            b_window,
            two * b_cell,
        );
        if db_b < best_db {
            best_db = db_b;
            b = b_new;
        }
        let (lp_new, db_p) = refine_axis(
            |x| precision_at(b, x.exp(), params, geom, detector),
            lp,
            (lp_lo, lp_hi),
            two * lp_cell,
        );
        if db_p < best_db {
            best_db = db_p;
            lp = lp_new;
            p = lp.exp();
        }
        if before.is_finite() && (before - best_db) <= rel_tol * best_db {
            break;
        }
    }

    // attach to the nearest feature
    let coll = Collision::new(p, geom)?;
    let zero = find_zero_crossing(params, coll.e_total);
    let cir = find_cir(&coll, params, geom, b_window).ok();
    let branch = match cir {
        Some(c) if (b - c).abs() < (b - zero).abs() => Branch::Cir,
        _ => Branch::Peak,
    };

    let edge_b = F::from_f64_const(1e-6) * (b_window.1 - b_window.0);
    let edge_p = F::from_f64_const(1e-6) * (lp_hi - lp_lo);
    let on_boundary = (b - b_window.0).abs() <= edge_b
        || (b_window.1 - b).abs() <= edge_b
        || (lp - lp_lo).abs() <= edge_p
        || (lp_hi - lp).abs() <= edge_p;

    Ok(Optimum {
        b,
        p,
        delta_b: best_db,
        branch,
        on_boundary,
    })
}

/// One-axis refinement: golden-section over a bracket around `x0`, expanding
/// the bracket while the minimum keeps landing on its edge.
fn refine_axis<F: Real>(f: impl Fn(F) -> F, x0: F, window: (F, F), w0: F) -> (F, F) {
    let mut w = w0;
    let mut x = x0;
    let mut fx = f(x0);
    let golden_tol = F::from_f64_const(1e-12);
    let edge_frac = F::from_f64_const(5e-3);
    for _ in 0..40 {
        let a = (x - w).max(window.0);
        let b = (x + w).min(window.1);
        let (xm, fm) = golden_min(&f, a, b, golden_tol);
        if fm < fx {
            x = xm;
            fx = fm;
        }
        let near_lo = (xm - a) <= edge_frac * w && a > window.0;
        let near_hi = (b - xm) <= edge_frac * w && b < window.1;
        if near_lo || near_hi {
            w = w * F::from_f64_const(4.0);
        } else if w <= F::from_f64_const(1e-10) * (window.1 - window.0) {
            break;
        } else {
            w = w * F::from_f64_const(0.25);
        }
    }
    (x, fx)
}

/// Dense ΔB map over explicit grids, with located features embedded.
///
/// Features are evaluated at the median momentum of the grid (they only move
/// with p when the δμ energy shift is modeled).
pub fn precision_map<F: Real>(
    params: &ResonanceParams<F>,
    geom: &TrapGeometry<F>,
    detector: &DetectorModel<F>,
    b_grid: &[F],
    p_grid: &[F],
) -> Result<PrecisionMap<F>> {
    if b_grid.is_empty() || p_grid.is_empty() {
        return Err(Error::invalid("grid", "grids must be non-empty"));
    }
    if b_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("b_grid", "must be strictly increasing"));
    }
    if p_grid.windows(2).any(|w| !(w[1] > w[0])) || !(p_grid[0] > F::zero()) {
        return Err(Error::invalid("p_grid", "must be positive and increasing"));
    }
    let mut delta_b = Vec::with_capacity(b_grid.len() * p_grid.len());
    for &p in p_grid {
        let coll = Collision::new(p, geom)?;
        let curve = TransmissionCurve::new(&coll, params, geom)?;
        for &b in b_grid {
            let db = fisher_on_curve(&curve, b, detector, params.dmu.is_some())
                .map(precision_from_fisher)
                .unwrap_or(F::infinity());
            delta_b.push(db);
        }
    }

    let p_mid = p_grid[p_grid.len() / 2];
    let coll = Collision::new(p_mid, geom)?;
    let zero = find_zero_crossing(params, coll.e_total);
    let cir = find_cir(&coll, params, geom, (b_grid[0], b_grid[b_grid.len() - 1])).ok();
    Ok(PrecisionMap {
        b_grid: b_grid.to_vec(),
        p_grid: p_grid.to_vec(),
        delta_b,
        features: MapFeatures {
            cir_b: cir,
            zero_crossing_b: zero,
            unit_transmission_b: zero,
        },
    })
}
