//! Bracketed bisection and the optimal-angle equation.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]`, which must bracket a sign change of `f`.
/// Stops once the bracket is narrower than `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Root(format!("no sign change on [{lo}, {hi}]")));
    }
    // 200 halvings exhaust f64 precision on any finite bracket.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Residual of `tan(phi + shift) = phi + ratio * shift`.
pub fn optimal_angle_residual(phi: f64, shift: f64, ratio: f64) -> f64 {
    (phi + shift).tan() - phi - ratio * shift
}

/// Largest `phi` in `(0, pi/2 - shift)` with `tan(phi + shift) = phi + ratio * shift`,
/// or `0` when no positive root exists.
///
/// The residual is nondecreasing in `phi` (its derivative is `tan^2`), so a
/// positive root exists exactly when the residual is negative at `0`, and it
/// is then unique.
pub fn optimal_angle(shift: f64, ratio: f64) -> f64 {
    let upper = FRAC_PI_2 - shift;
    if upper <= 0.0 || optimal_angle_residual(0.0, shift, ratio) >= 0.0 {
        return 0.0;
    }
    // tan blows up at the right end, so shrink until the residual is positive.
    let mut hi = upper;
    let mut gap = 1e-3_f64.min(upper / 2.0);
    loop {
        let candidate = upper - gap;
        if optimal_angle_residual(candidate, shift, ratio) > 0.0 {
            hi = candidate;
            break;
        }
        gap *= 0.5;
        if gap < 1e-300 {
            break;
        }
    }
    bisect(|p| optimal_angle_residual(p, shift, ratio), 0.0, hi, 0.0).unwrap_or(0.0)
}
