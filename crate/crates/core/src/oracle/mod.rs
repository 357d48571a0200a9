//! Brute-force Diósi-Penrose energies of arbitrary mass distributions.
//!
//! Uniform shapes are rasterised with exact cell occupancies and summed
//! pairwise with a point kernel and the analytic cube self-term. Gaussian
//! sites use the exact Gaussian-Gaussian kernel. Every voxel estimate is
//! computed at two resolutions and extrapolated.

mod distribution;
mod engine;
mod field_form;
mod grid;
mod interference;
mod kernel;
mod shell;
mod sites;
mod symmetry;
mod work;

pub mod checks;

pub use distribution::{GaussianSite, LatticeSpec, MassDistribution, Shape, SuperposedPair, UniformShape, Vec3, VoxelGrid};
pub use field_form::dp_energy_field_form;
pub use interference::{interference_terms, Interference};
pub use kernel::{cube_attraction, cube_self_term, gaussian_kernel, SelfCell};
pub use shell::{f_sigma_by_shells, nucleus_energy_by_shells};
pub use work::separation_work;

use crate::constants::G;
use crate::error::{Error, Result};
use crate::formulary::{f_sigma, Profile};
use crate::numeric::adaptive;
use grid::{build, classify, min_feature, plan, signed, Field, Grid, SignedPart};
use kernel::VoxelKernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Pair sum reduced over the symmetry group of the density difference.
    PairwiseSum,
    /// Potential evaluated at every occupied cell, then ½Σ q·Φ.
    PotentialGrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub method: Method,
    /// Cells across the thinnest feature of the finer grid.
    pub resolution: usize,
    pub target_rel_err: f64,
    pub self_cell: SelfCell,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { method: Method::PairwiseSum, resolution: 32, target_rel_err: 1e-3, self_cell: SelfCell::AnalyticCube }
    }
}

impl QuadratureSpec {
    pub fn with_resolution(resolution: usize) -> Self {
        QuadratureSpec { resolution, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_rel_err > 0.0 && self.target_rel_err <= 0.1) {
            return Err(Error::invalid(format!("target_rel_err must lie in (0, 0.1], got {}", self.target_rel_err)));
        }
        if self.resolution < 4 {
            return Err(Error::invalid(format!("resolution must be >= 4, got {}", self.resolution)));
        }
        if let SelfCell::Plummer(eps) = self.self_cell {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(Error::invalid("softening length must be finite and >= 0"));
            }
        }
        Ok(())
    }

    fn use_symmetry(&self) -> bool {
        self.method == Method::PairwiseSum
    }
}

/// An oracle value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// Extrapolated value (J).
    pub value: f64,
    /// |fine − coarse|; zero for exact kernels.
    pub error: f64,
    pub fine: f64,
    pub coarse: Option<f64>,
    /// Whether `error` meets the target relative error.
    pub converged: bool,
}

impl Estimate {
    pub(crate) fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0, fine: value, coarse: None, converged: true }
    }

    /// First-order extrapolation from cell sizes h (fine) and 2h (coarse).
    pub(crate) fn richardson(fine: f64, coarse: f64, target: f64) -> Self {
        let value = 2.0 * fine - coarse;
        let error = (fine - coarse).abs();
        Estimate { value, error, fine, coarse: Some(coarse), converged: error <= target * value.abs() }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.error / self.value.abs()
        }
    }
}

/// The two states of a pair in one representation.
pub(crate) enum PairKind {
    Empty,
    Sites(Vec<GaussianSite>, Vec<GaussianSite>),
    Shapes(Vec<UniformShape>, Vec<UniformShape>),
    Voxels(VoxelGrid, VoxelGrid),
}

pub(crate) fn pair_kind(pair: &SuperposedPair) -> Result<PairKind> {
    let (a, b) = (&pair.state1, &pair.state2);
    if a.is_empty() && b.is_empty() {
        return Ok(PairKind::Empty);
    }
    if let (Some(x), Some(y)) = (a.sites(), b.sites()) {
        return Ok(PairKind::Sites(x, y));
    }
    if let (Some(x), Some(y)) = (a.parts(), b.parts()) {
        return Ok(PairKind::Shapes(x, y));
    }
    if let (MassDistribution::VoxelGrid(x), MassDistribution::VoxelGrid(y)) = (a, b) {
        return Ok(PairKind::Voxels(x.clone(), y.clone()));
    }
    Err(Error::invalid("both states must be Gaussian sites, uniform shapes, or voxel grids on one grid"))
}

/// Fine cell size for a set of parts.
pub(crate) fn cell_size(parts: &[SignedPart], resolution: usize) -> f64 {
    min_feature(parts) / resolution as f64
}

pub(crate) fn shape_field(parts: &[SignedPart], h: f64) -> Field {
    let grid = plan(parts, h, 1);
    build(&grid, parts, classify(parts))
}

/// Δρ of two voxel states as a dense field.
pub(crate) fn voxel_field(a: &VoxelGrid, b: &VoxelGrid) -> Field {
    let data = a.density.iter().zip(&b.density).map(|(x, y)| x - y).collect();
    Field { grid: Grid { origin: a.origin, h: a.h, dims: a.dims }, layout: grid::Layout::Dense(data) }
}

/// (G/2)·Σ Δρ_a Δρ_b K over two fields on one grid, in joules.
pub(crate) fn field_energy(a: &Field, b: &Field, q: &QuadratureSpec) -> f64 {
    let h = a.grid.h;
    let kernel = VoxelKernel::new(q.self_cell, h);
    0.5 * G * h.powi(5) * engine::cross_sum(a, b, &kernel, q.use_symmetry())
}

/// [`field_energy`] for several field pairs on one grid.
pub(crate) fn field_energies(pairs: &[(&Field, &Field)], q: &QuadratureSpec) -> Vec<f64> {
    let h = pairs[0].0.grid.h;
    let kernel = VoxelKernel::new(q.self_cell, h);
    let scale = 0.5 * G * h.powi(5);
    engine::cross_sums(pairs, &kernel, q.use_symmetry()).into_iter().map(|v| scale * v).collect()
}

/// Energy of a pair of uniform-shape states at cell size `h`, without
/// extrapolation.
pub(crate) fn shapes_energy_at(parts: &[SignedPart], h: f64, q: &QuadratureSpec) -> f64 {
    let f = shape_field(parts, h);
    field_energy(&f, &f, q)
}

/// Diósi-Penrose energy (G/2)∬Δρ(x)Δρ(y)/|x − y| of a superposed pair.
pub fn dp_energy(pair: &SuperposedPair, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    pair.validate()?;
    if pair.state1 == pair.state2 {
        return Ok(Estimate::exact(0.0));
    }
    match pair_kind(pair)? {
        PairKind::Empty => Ok(Estimate::exact(0.0)),
        PairKind::Sites(a, b) => Ok(Estimate::exact(0.5 * G * sites::self_energy_sum(&a, &b))),
        PairKind::Shapes(a, b) => {
            let parts = signed(&a, &b);
            let h = cell_size(&parts, q.resolution);
            let fine = shapes_energy_at(&parts, h, q);
            let coarse = shapes_energy_at(&parts, 2.0 * h, q);
            Ok(Estimate::richardson(fine, coarse, q.target_rel_err))
        }
        PairKind::Voxels(a, b) => {
            let f = voxel_field(&a, &b);
            let fine = field_energy(&f, &f, q);
            let c = voxel_field(&a.coarsen(), &b.coarsen());
            let coarse = field_energy(&c, &c, q);
            Ok(Estimate::richardson(fine, coarse, q.target_rel_err))
        }
    }
}

/// ⟨f_σ(u·x)⟩ under a displacement profile, by adaptive quadrature over u.
pub fn averaged_f(profile: Profile, x: f64) -> Result<f64> {
    let fx = f_sigma(x)?;
    if profile == Profile::Delta || x == 0.0 {
        return Ok(fx);
    }
    let (v, _) = adaptive(
        |u| profile.weight(u) * f_sigma(u * x).unwrap_or(0.0),
        0.0,
        1.0,
        1e-13 * fx.max(1e-300),
    );
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulary::profile_average;
    use approx::assert_relative_eq;

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        assert!(QuadratureSpec { resolution: 3, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { target_rel_err: 0.2, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { target_rel_err: 0.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn averaged_f_matches_closed_forms() {
        for p in Profile::ALL {
            for x in [0.05, 0.7, 3.0, 11.0, 40.0] {
                assert_relative_eq!(averaged_f(p, x).unwrap(), profile_average(p, x).unwrap(), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn identical_states_give_zero() {
        let d = MassDistribution::uniform(Shape::Sphere { center: [0.0; 3], radius: 1.0 }, 1.0);
        let p = SuperposedPair::new(d.clone(), d).unwrap();
        assert_eq!(dp_energy(&p, &QuadratureSpec::default()).unwrap().value, 0.0);
    }

    #[test]
    fn mixed_families_rejected() {
        let a = MassDistribution::uniform(Shape::Sphere { center: [0.0; 3], radius: 1.0 }, 1.0);
        let m = a.total_mass();
        let b = MassDistribution::GaussianCloud(vec![GaussianSite { center: [0.0; 3], mass: m, sigma: 0.1 }]);
        let p = SuperposedPair::new(a, b).unwrap();
        assert!(dp_energy(&p, &QuadratureSpec::default()).is_err());
    }
}
