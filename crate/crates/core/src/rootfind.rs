//! Bracketed root finding and 1D minimization.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_ITER: usize = 200;

/// Brent's method: find a root of `f` known to change sign on `[lo, hi]`.
///
/// Follows the classic inverse-quadratic/secant/bisection hybrid; the root is
/// refined until the bracket width falls below `tol` plus machine precision
/// around the iterate.
pub fn brent<F: Real>(f: impl Fn(F) -> F, lo: F, hi: F, tol: F) -> Result<F> {
    let two = F::from_f64_const(2.0);
    let three = F::from_f64_const(3.0);
    let half = F::from_f64_const(0.5);
    let eps = F::epsilon();

    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == F::zero() {
        return Ok(a);
    }
    if fb == F::zero() {
        return Ok(b);
    }
    if (fa > F::zero()) == (fb > F::zero()) {
        return Err(Error::NoBracket {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if (fb > F::zero()) == (fc > F::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + half * tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == F::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = F::one() - s;
            } else {
                q = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * q * (q - r) - (b - a) * (r - F::one()));
                q = (q - F::one()) * (r - F::one()) * (s - F::one());
            }
            if p > F::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b = b + d;
        } else if xm > F::zero() {
            b = b + tol1;
        } else {
            b = b - tol1;
        }
        fb = f(b);
    }
    Ok(b)
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
///
/// Returns (argmin, min). If the true minimum sits on the interval boundary
/// the search converges there; callers detect that by comparing against the
/// endpoints themselves, which are also evaluated.
pub fn golden_min<F: Real>(f: impl Fn(F) -> F, lo: F, hi: F, tol: F) -> (F, F) {
    let inv_phi = F::from_f64_const(0.6180339887498949);
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..MAX_ITER {
        if (b - a).abs() <= tol * (a.abs() + b.abs() + F::one()) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    // include the endpoints so boundary minima are not missed
    let half = F::from_f64_const(0.5);
    let xm = half * (a + b);
    let mut best = (xm, f(xm));
    for (x, fx) in [(lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_simple_roots() {
        let r = brent(|x: f64| x.sin() - 0.5 * x, 1.0, 2.0, 1e-14).unwrap();
        assert!((r.sin() - 0.5 * r).abs() < 1e-12);
        let r = brent(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        assert!(matches!(
            brent(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn golden_interior_minimum() {
        let (x, fx) = golden_min(|x: f64| (x - 0.3).powi(2) + 1.0, -4.0, 5.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-13);
    }

    #[test]
    fn golden_boundary_minimum() {
        let (x, _) = golden_min(|x: f64| x, 2.0, 3.0, 1e-12);
        assert_eq!(x, 2.0);
    }
}
