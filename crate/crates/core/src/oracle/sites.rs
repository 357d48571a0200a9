//! Sums over Gaussian sites with the exact Gaussian-Gaussian kernel.

use super::distribution::{GaussianSite, Vec3};
use super::kernel::{gaussian_kernel, gaussian_kernel_slope};

/// Σ_i Σ_j m_i m_j erf(r_ij/a_ij)/r_ij between two site sets, with `b`
/// shifted by `shift`.
pub(crate) fn mutual(a: &[GaussianSite], b: &[GaussianSite], shift: Vec3) -> f64 {
    let mut total = 0.0;
    for s in a {
        let mut row = 0.0;
        for t in b {
            let d = [
                t.center[0] + shift[0] - s.center[0],
                t.center[1] + shift[1] - s.center[1],
                t.center[2] + shift[2] - s.center[2],
            ];
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            row += t.mass * gaussian_kernel(r, s.sigma * s.sigma + t.sigma * t.sigma);
        }
        total += s.mass * row;
    }
    total
}

/// ∬ Δρ Δρ/r for Δρ = (sites of state 1) − (sites of state 2).
pub(crate) fn self_energy_sum(s1: &[GaussianSite], s2: &[GaussianSite]) -> f64 {
    let zero = [0.0; 3];
    mutual(s1, s1, zero) + mutual(s2, s2, zero) - 2.0 * mutual(s1, s2, zero)
}

/// d/ds of Σ m_i m_j K(|r_j + s·e − r_i|): the pull between the sites and
/// a copy displaced by s along the unit vector `e`.
pub(crate) fn mutual_slope(a: &[GaussianSite], e: Vec3, s: f64) -> f64 {
    let mut total = 0.0;
    for p in a {
        let mut row = 0.0;
        for q in a {
            let d = [
                q.center[0] + s * e[0] - p.center[0],
                q.center[1] + s * e[1] - p.center[1],
                q.center[2] + s * e[2] - p.center[2],
            ];
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if r == 0.0 {
                continue;
            }
            let along = (d[0] * e[0] + d[1] * e[1] + d[2] * e[2]) / r;
            row += q.mass * gaussian_kernel_slope(r, p.sigma * p.sigma + q.sigma * q.sigma) * along;
        }
        total += p.mass * row;
    }
    total
}
