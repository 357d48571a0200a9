use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::numeric::{adaptive, composite};
use std::cell::Cell;

/// Bisection steps allowed when locating the lifetime.
pub const MAX_BISECTIONS: usize = 80;

const RELATIVE_WIDTH: f64 = 1e-12;
const INTEGRAL_TOLERANCE: f64 = 1e-11;
/// Lower end of the initial bracket, relative to t_max.
const FLOOR: f64 = 1e-30;

/// The time T with ∫₀^T E(t) dt = ħ for a nonnegative energy E(t) (J), or
/// infinity when the integral up to `t_max` stays below ħ.
pub fn generalized_lifetime<F: Fn(f64) -> f64>(energy: F, t_max: f64) -> Result<f64> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::invalid(format!("search horizon must be positive and finite, got {t_max}")));
    }
    let bad = Cell::new(None);
    let e = |t: f64| {
        let v = energy(t);
        if !(v >= 0.0 && v.is_finite()) {
            bad.set(Some((t, v)));
            return 0.0;
        }
        v
    };
    let tol = HBAR * INTEGRAL_TOLERANCE;
    let segment = |a: f64, b: f64| {
        let rough = composite(a, b, 1, &e).abs();
        adaptive(&e, a, b, tol.max(rough * INTEGRAL_TOLERANCE)).0
    };
    let check = || match bad.get() {
        Some((t, v)) => Err(Error::invalid(format!("energy must be nonnegative and finite, got {v} J at t = {t} s"))),
        None => Ok(()),
    };

    let total = segment(0.0, t_max);
    check()?;
    if total < HBAR {
        return Ok(f64::INFINITY);
    }
    let mut lo = t_max * FLOOR;
    let mut cum_lo = segment(0.0, lo);
    if cum_lo >= HBAR {
        return Ok(lo);
    }
    let mut hi = t_max;
    for _ in 0..MAX_BISECTIONS {
        let mid = if hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        let cum = cum_lo + segment(lo, mid);
        check()?;
        if cum < cum_lo - tol {
            return Err(Error::Numerical(format!("cumulative energy integral decreased at t = {mid} s")));
        }
        if cum < HBAR {
            lo = mid;
            cum_lo = cum;
        } else {
            hi = mid;
        }
        if hi - lo <= RELATIVE_WIDTH * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
