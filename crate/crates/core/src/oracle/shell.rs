//! Energy of a displaced Gaussian nucleus by nested radial and angular
//! quadrature of Newton's shell potential, without any erf closed form.

use crate::constants::{G, SQRT_PI};
use crate::error::{Error, Result};
use crate::numeric::composite;
use std::f64::consts::PI;

/// Radius (in σ) beyond which the density is negligible.
const REACH: f64 = 12.0;

fn density(s: f64) -> f64 {
    (2.0 * PI).powf(-1.5) * (-0.5 * s * s).exp()
}

/// Potential of a unit-mass, unit-σ Gaussian at radius r: enclosed mass
/// over r plus the outer shells.
fn potential(r: f64) -> f64 {
    let outer = composite(r, r.max(REACH), 8, |s| 4.0 * PI * s * density(s));
    if r == 0.0 {
        return outer;
    }
    let inner = composite(0.0, r, 8, |s| 4.0 * PI * s * s * density(s));
    inner / r + outer
}

/// ∫ density(|r·n − d·ẑ|) dμ over μ = cos θ ∈ [−1, 1], integrated over the
/// distance t to the second centre, dμ = t·dt/(r·d).
fn angular(r: f64, d: f64) -> f64 {
    if r * d == 0.0 {
        return 2.0 * density(r.max(d));
    }
    let lo = (r - d).abs();
    let hi = (r + d).min(lo + REACH);
    composite(lo, hi, 8, |t| density(t) * t) / (r * d)
}

/// Mutual potential energy of two unit Gaussians whose centres are `d` apart.
fn mutual(d: f64) -> f64 {
    let reach = d + REACH;
    composite(0.0, reach, 48, |r| {
        potential(r) * r * r * 2.0 * PI * angular(r, d)
    })
}

/// f_σ(x) from the quadrature: √π·(U(0) − U(x)) in units of σ.
pub fn f_sigma_by_shells(x: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::invalid(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(SQRT_PI * (mutual(0.0) - mutual(x)))
}

/// Energy of a nucleus of mass `m` and spatial variation `sigma` displaced by
/// `ds`, from the quadrature.
pub fn nucleus_energy_by_shells(m: f64, sigma: f64, ds: f64) -> Result<f64> {
    if !(m > 0.0 && sigma > 0.0) {
        return Err(Error::invalid("nucleus mass and sigma must be positive"));
    }
    Ok(G * m * m / sigma * (mutual(0.0) - mutual(ds / sigma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn self_potential_matches_gaussian_self_energy() {
        // U(0) = 1/√π for two coincident unit Gaussians of σ = 1.
        assert_relative_eq!(mutual(0.0), 1.0 / SQRT_PI, max_relative = 1e-10);
    }

    #[test]
    fn far_centres_act_as_points() {
        assert_relative_eq!(mutual(30.0), 1.0 / 30.0, max_relative = 1e-9);
    }

    #[test]
    fn shell_potential_has_point_tail() {
        assert_relative_eq!(potential(15.0), 1.0 / 15.0, max_relative = 1e-9);
    }
}
