use crate::constants::{G, SQRT_PI};
use crate::error::{Error, Result};

/// Below this argument f_σ is evaluated from its power series.
const SERIES_BELOW: f64 = 1e-4;

/// Normalised energy of one Gaussian nucleus superposed with itself at
/// displacement x·σ: f_σ(x) = 1 − (√π/x)·erf(x/2).
///
/// Rises as x²/12 for small x and approaches 1 − √π/x for large x.
pub fn f_sigma(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::invalid(format!("f_sigma argument must be >= 0, got {x}")));
    }
    Ok(f_sigma_unchecked(x))
}

pub(crate) fn f_sigma_unchecked(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x < SERIES_BELOW {
        let x2 = x * x;
        return x2 / 12.0 - x2 * x2 / 160.0;
    }
    1.0 - SQRT_PI / x * libm::erf(0.5 * x)
}

/// Energy of a nucleus of mass `m` with spatial variation `sigma` displaced
/// by `ds`: G m²/(√π σ)·f_σ(ds/σ).
pub fn nucleus_dp_energy(m: f64, sigma: f64, ds: f64) -> Result<f64> {
    if !(m > 0.0 && sigma > 0.0) {
        return Err(Error::invalid("nucleus mass and sigma must be positive"));
    }
    if !(ds >= 0.0) {
        return Err(Error::invalid(format!("displacement must be >= 0, got {ds}")));
    }
    Ok(G * m * m / (SQRT_PI * sigma) * f_sigma_unchecked(ds / sigma))
}
