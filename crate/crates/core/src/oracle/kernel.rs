//! Interaction kernels in units of the cell size.

use crate::constants::SQRT_PI;
use std::f64::consts::PI;

/// ∬ 1/|x − y| over two copies of the unit cube.
pub fn cube_self_term() -> f64 {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    2.0 * ((1.0 + s2 - 2.0 * s3) / 5.0 - PI / 3.0 + (1.0 + s2).ln() + (2.0 + s3).ln())
}

/// How the coincident-cell term of the voxel sum is treated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelfCell {
    /// Exact self-interaction of a uniform cube.
    AnalyticCube,
    /// 1/√(r² + ε²) for every pair, with ε in metres.
    Plummer(f64),
}

/// Kernel of the voxel sum for offset squared norm `r2` (cells²).
#[derive(Debug, Clone, Copy)]
pub(crate) struct VoxelKernel {
    eps2: f64,
    self_term: f64,
}

impl VoxelKernel {
    pub(crate) fn new(rule: SelfCell, h: f64) -> Self {
        match rule {
            SelfCell::AnalyticCube => VoxelKernel { eps2: 0.0, self_term: cube_self_term() },
            SelfCell::Plummer(eps) => {
                let e = eps / h;
                VoxelKernel { eps2: e * e, self_term: if e > 0.0 { 1.0 / e } else { f64::INFINITY } }
            }
        }
    }

    #[inline(always)]
    pub(crate) fn eval(&self, r2: f64) -> f64 {
        if r2 == 0.0 {
            self.self_term
        } else {
            1.0 / (r2 + self.eps2).sqrt()
        }
    }

    #[inline(always)]
    pub(crate) fn softening(&self) -> f64 {
        self.eps2
    }

    pub(crate) fn self_term(&self) -> f64 {
        self.self_term
    }
}

/// Mutual potential erf(r/a)/r of two unit-mass Gaussians whose variances
/// sum to `var_sum`, a = √(2·var_sum).
#[inline]
pub fn gaussian_kernel(r: f64, var_sum: f64) -> f64 {
    let a = (2.0 * var_sum).sqrt();
    let t = r / a;
    if t < 1e-3 {
        let t2 = t * t;
        2.0 / (a * SQRT_PI) * (1.0 - t2 / 3.0 + t2 * t2 / 10.0)
    } else {
        libm::erf(t) / r
    }
}

/// d/dr of [`gaussian_kernel`].
#[inline]
pub fn gaussian_kernel_slope(r: f64, var_sum: f64) -> f64 {
    let a = (2.0 * var_sum).sqrt();
    let t = r / a;
    if t < 1e-3 {
        let t2 = t * t;
        2.0 / (a * SQRT_PI) * (-2.0 * t / (3.0 * a) + 0.4 * t2 * t / a)
    } else {
        2.0 / (a * SQRT_PI) * (-t * t).exp() / r - libm::erf(t) / (r * r)
    }
}

/// ln(z + √(x² + y² + z²)) without cancellation for negative z.
fn ln_z_plus_r(z: f64, rho2: f64, r: f64) -> f64 {
    if z >= 0.0 {
        (z + r).ln()
    } else {
        (rho2 / (r - z)).ln()
    }
}

/// Gradient of ∫ 1/|p − x| d³x over the unit cube centred at the origin,
/// i.e. the attraction of a unit-density cube at offset `p` (cells).
pub fn cube_attraction(p: [f64; 3]) -> [f64; 3] {
    let mut g = [0.0; 3];
    for axis in 0..3 {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        let mut sum = 0.0;
        for sa in [-0.5, 0.5] {
            for sb in [-0.5, 0.5] {
                for sc in [-0.5, 0.5] {
                    let x = sa - p[axis];
                    let y = sb - p[b];
                    let z = sc - p[c];
                    let r = (x * x + y * y + z * z).sqrt();
                    let mut f = 0.0;
                    if y != 0.0 {
                        f += y * ln_z_plus_r(z, x * x + y * y, r);
                    }
                    if z != 0.0 {
                        f += z * ln_z_plus_r(y, x * x + z * z, r);
                    }
                    if x != 0.0 && r > 0.0 {
                        f -= x * (y * z / (x * r)).atan();
                    }
                    let sign = if (sa > 0.0) == (sb > 0.0) { 1.0 } else { -1.0 } * if sc > 0.0 { 1.0 } else { -1.0 };
                    sum += sign * f;
                }
            }
        }
        g[axis] = -sum;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::composite;
    use approx::assert_relative_eq;

    #[test]
    fn cube_self_term_matches_autocorrelation_integral() {
        // 8∫_{[0,1]³} Π(1 − t_i)/|t| in spherical coordinates over the octant.
        let radial = |dir: [f64; 3]| {
            let rmax = 1.0 / dir.iter().cloned().fold(0.0, f64::max);
            composite(0.0, rmax, 4, |r| (1.0 - r * dir[0]) * (1.0 - r * dir[1]) * (1.0 - r * dir[2]) * r)
        };
        let v = 8.0
            * composite(0.0, PI / 2.0, 8, |th| {
                th.sin()
                    * composite(0.0, PI / 2.0, 8, |ph| {
                        radial([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()])
                    })
            });
        assert_relative_eq!(cube_self_term(), v, max_relative = 1e-6);
        assert_relative_eq!(cube_self_term(), 1.882_312_644_389_66, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_kernel_branches_join() {
        let v = 0.3;
        let a = (2.0 * v as f64).sqrt();
        let r = 1e-3 * a;
        assert_relative_eq!(gaussian_kernel(r * 0.999_999, v), libm::erf(r / a) / r, max_relative = 1e-9);
        let h = 1e-6;
        let fd = (gaussian_kernel(0.5 + h, v) - gaussian_kernel(0.5 - h, v)) / (2.0 * h);
        assert_relative_eq!(gaussian_kernel_slope(0.5, v), fd, max_relative = 1e-7);
        assert_relative_eq!(gaussian_kernel(40.0, v), 1.0 / 40.0, max_relative = 1e-14);
    }

    #[test]
    fn cube_attraction_far_field_is_point_like() {
        let p = [7.0, -3.0, 5.0];
        let r = (49.0f64 + 9.0 + 25.0).sqrt();
        let g = cube_attraction(p);
        for a in 0..3 {
            assert_relative_eq!(g[a], -p[a] / r.powi(3), max_relative = 1e-4);
        }
    }

    #[test]
    fn cube_attraction_matches_potential_gradient() {
        // Potential by quadrature, differentiated numerically.
        let pot = |p: [f64; 3]| {
            composite(-0.5, 0.5, 2, |x| {
                composite(-0.5, 0.5, 2, |y| {
                    composite(-0.5, 0.5, 2, |z| {
                        1.0 / ((p[0] - x).powi(2) + (p[1] - y).powi(2) + (p[2] - z).powi(2)).sqrt()
                    })
                })
            })
        };
        let p = [1.1, 0.4, -0.7];
        let h = 1e-4;
        let g = cube_attraction(p);
        for a in 0..3 {
            let mut hi = p;
            let mut lo = p;
            hi[a] += h;
            lo[a] -= h;
            assert_relative_eq!(g[a], (pot(hi) - pot(lo)) / (2.0 * h), max_relative = 1e-6);
        }
        // Inside, the attraction vanishes at the centre and points inward.
        let c = cube_attraction([0.0; 3]);
        assert!(c.iter().all(|v| v.abs() < 1e-12));
        assert!(cube_attraction([0.3, 0.0, 0.0])[0] < 0.0);
    }
}
