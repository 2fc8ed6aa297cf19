//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_DEPTH: usize = 48;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Classic recursive Simpson with Richardson correction; each subdivision
/// halves the tolerance budget. Errors out if the recursion depth limit is hit
/// before the local error estimate drops below budget.
pub fn adaptive_simpson<F: Real>(f: &impl Fn(F) -> F, a: F, b: F, tol: F) -> Result<F> {
    if a == b {
        return Ok(F::zero());
    }
    let half = F::from_f64_const(0.5);
    let m = half * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    step(f, a, m, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[inline]
fn simpson<F: Real>(fa: F, fm: F, fb: F, h: F) -> F {
    let six = F::from_f64_const(6.0);
    let four = F::from_f64_const(4.0);
    h / six * (fa + four * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn step<F: Real>(
    f: &impl Fn(F) -> F,
    a: F,
    m: F,
    b: F,
    fa: F,
    fm: F,
    fb: F,
    whole: F,
    tol: F,
    depth: usize,
) -> Result<F> {
    let half = F::from_f64_const(0.5);
    let lm = half * (a + m);
    let rm = half * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    let fifteen = F::from_f64_const(15.0);
    if err.abs() <= fifteen * tol || (m - a).abs() <= F::epsilon() * a.abs().max(b.abs()) {
        return Ok(left + right + err / fifteen);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure {
            error_estimate: (err / fifteen).abs().to_f64_lossy(),
        });
    }
    let lt = half * tol;
    Ok(step(f, a, lm, m, fa, flm, fm, left, lt, depth - 1)?
        + step(f, m, rm, b, fm, frm, fb, right, lt, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-12); // x^4/4 - x^2 over [0,2] = 4 - 4
    }

    #[test]
    fn gaussian_mass() {
        let sigma = 0.3f64;
        let f = |x: f64| (-0.5 * (x / sigma).powi(2)).exp();
        let v = adaptive_simpson(&f, -8.0 * sigma, 8.0 * sigma, 1e-12).unwrap();
        let expected = sigma * (2.0 * std::f64::consts::PI).sqrt();
        assert!((v - expected).abs() < 1e-10, "{v} vs {expected}");
    }

    #[test]
    fn sharp_dip() {
        // Lorentzian-like dip needs subdivision but converges.
        let f = |x: f64| 1.0 - 1e-6 / (x * x + 1e-6);
        let v = adaptive_simpson(&f, -1.0, 1.0, 1e-10).unwrap();
        let w = 1e-3f64; // sqrt(1e-6)
        let expected = 2.0 - 2.0 * w * (1.0 / w).atan();
        assert!((v - expected).abs() < 1e-8, "{v} vs {expected}");
    }
}
