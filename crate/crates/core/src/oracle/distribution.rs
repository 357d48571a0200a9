use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::io::Write;

pub type Vec3 = [f64; 3];

/// A Gaussian mass cloud with per-axis standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSite {
    pub center: Vec3,
    pub mass: f64,
    pub sigma: f64,
}

/// Simple cubic lattice of sites, optionally jittered to mimic an amorphous
/// solid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub origin: Vec3,
    /// Lattice constant (m).
    pub spacing: f64,
    pub counts: [usize; 3],
    /// Uniform jitter amplitude as a fraction of the spacing, at most 0.1.
    pub jitter: f64,
    pub seed: u64,
}

impl LatticeSpec {
    pub fn positions(&self) -> Vec<Vec3> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.counts.iter().product());
        for i in 0..self.counts[0] {
            for j in 0..self.counts[1] {
                for k in 0..self.counts[2] {
                    let mut p = [
                        self.origin[0] + i as f64 * self.spacing,
                        self.origin[1] + j as f64 * self.spacing,
                        self.origin[2] + k as f64 * self.spacing,
                    ];
                    if self.jitter > 0.0 {
                        for c in p.iter_mut() {
                            *c += self.jitter * self.spacing * rng.gen_range(-1.0..=1.0);
                        }
                    }
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Solid bodies of uniform density. Cylinders have their axis along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Box { center: Vec3, size: Vec3 },
    Cylinder { center: Vec3, radius: f64, length: f64 },
    Sphere { center: Vec3, radius: f64 },
}

impl Shape {
    pub fn volume(&self) -> f64 {
        match *self {
            Shape::Box { size, .. } => size[0] * size[1] * size[2],
            Shape::Cylinder { radius, length, .. } => PI * radius * radius * length,
            Shape::Sphere { radius, .. } => 4.0 / 3.0 * PI * radius.powi(3),
        }
    }

    /// Smallest dimension, which sets the voxel size.
    pub fn feature(&self) -> f64 {
        match *self {
            Shape::Box { size, .. } => size[0].min(size[1]).min(size[2]),
            Shape::Cylinder { radius, length, .. } => (2.0 * radius).min(length),
            Shape::Sphere { radius, .. } => 2.0 * radius,
        }
    }

    pub fn bounds(&self) -> (Vec3, Vec3) {
        let (c, half) = match *self {
            Shape::Box { center, size } => (center, [size[0] / 2.0, size[1] / 2.0, size[2] / 2.0]),
            Shape::Cylinder { center, radius, length } => (center, [radius, radius, length / 2.0]),
            Shape::Sphere { center, radius } => (center, [radius; 3]),
        };
        ([c[0] - half[0], c[1] - half[1], c[2] - half[2]], [c[0] + half[0], c[1] + half[1], c[2] + half[2]])
    }

    pub fn center(&self) -> Vec3 {
        match *self {
            Shape::Box { center, .. } | Shape::Cylinder { center, .. } | Shape::Sphere { center, .. } => center,
        }
    }

    pub fn translated(&self, d: Vec3) -> Shape {
        let c = self.center();
        let nc = [c[0] + d[0], c[1] + d[1], c[2] + d[2]];
        match *self {
            Shape::Box { size, .. } => Shape::Box { center: nc, size },
            Shape::Cylinder { radius, length, .. } => Shape::Cylinder { center: nc, radius, length },
            Shape::Sphere { radius, .. } => Shape::Sphere { center: nc, radius },
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::Box { size, .. } => size.iter().all(|s| *s > 0.0 && s.is_finite()),
            Shape::Cylinder { radius, length, .. } => radius > 0.0 && length > 0.0 && radius.is_finite() && length.is_finite(),
            Shape::Sphere { radius, .. } => radius > 0.0 && radius.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("degenerate shape {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformShape {
    pub shape: Shape,
    /// Mass density (kg·m⁻³).
    pub rho: f64,
}

/// Densities on a regular grid; index (i·ny + j)·nz + k, cell (i, j, k)
/// spanning origin + h·[i, i+1] × … .
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    pub origin: Vec3,
    pub h: f64,
    pub dims: [usize; 3],
    pub density: Vec<f64>,
}

impl VoxelGrid {
    pub fn zeros(origin: Vec3, h: f64, dims: [usize; 3]) -> Self {
        VoxelGrid { origin, h, dims, density: vec![0.0; dims[0] * dims[1] * dims[2]] }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.h.powi(3)
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> Vec3 {
        [
            self.origin[0] + (i as f64 + 0.5) * self.h,
            self.origin[1] + (j as f64 + 0.5) * self.h,
            self.origin[2] + (k as f64 + 0.5) * self.h,
        ]
    }

    /// Merges 2×2×2 blocks, padding odd dimensions with empty cells.
    pub fn coarsen(&self) -> VoxelGrid {
        let nd = [self.dims[0].div_ceil(2), self.dims[1].div_ceil(2), self.dims[2].div_ceil(2)];
        let mut out = VoxelGrid::zeros(self.origin, 2.0 * self.h, nd);
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let v = self.density[self.index(i, j, k)];
                    let idx = out.index(i / 2, j / 2, k / 2);
                    out.density[idx] += v / 8.0;
                }
            }
        }
        out
    }

    fn same_geometry(&self, o: &VoxelGrid) -> bool {
        self.dims == o.dims && self.h == o.h && self.origin == o.origin
    }

    /// Writes one slice normal to `axis` as delimited text: two in-plane
    /// coordinates (m) and the density (kg·m⁻³).
    pub fn write_slice<W: Write>(&self, axis: usize, index: usize, out: &mut W) -> Result<()> {
        if axis > 2 || index >= self.dims[axis] {
            return Err(Error::invalid("slice outside the grid"));
        }
        let (a, b) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let io = |e: std::io::Error| Error::Io(e.to_string());
        writeln!(out, "# axis {axis} index {index}; columns: x{a} (m), x{b} (m), density (kg/m^3)").map_err(io)?;
        for p in 0..self.dims[a] {
            for q in 0..self.dims[b] {
                let mut ijk = [0usize; 3];
                ijk[axis] = index;
                ijk[a] = p;
                ijk[b] = q;
                let c = self.cell_center(ijk[0], ijk[1], ijk[2]);
                writeln!(out, "{:.6e}\t{:.6e}\t{:.6e}", c[a], c[b], self.density[self.index(ijk[0], ijk[1], ijk[2])])
                    .map_err(io)?;
            }
        }
        Ok(())
    }
}

/// Input of the oracle. Composite bodies are unions of uniform shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum MassDistribution {
    GaussianCloud(Vec<GaussianSite>),
    GaussianLattice { lattice: LatticeSpec, mass: f64, sigma: f64 },
    VoxelGrid(VoxelGrid),
    UniformShape(UniformShape),
    Composite(Vec<UniformShape>),
}

impl MassDistribution {
    /// The absent body: no mass anywhere.
    pub fn empty() -> Self {
        MassDistribution::GaussianCloud(Vec::new())
    }

    pub fn uniform(shape: Shape, rho: f64) -> Self {
        MassDistribution::UniformShape(UniformShape { shape, rho })
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MassDistribution::GaussianCloud(s) => s.is_empty(),
            MassDistribution::Composite(p) => p.is_empty(),
            _ => false,
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            MassDistribution::GaussianCloud(s) => s.iter().map(|s| s.mass).sum(),
            MassDistribution::GaussianLattice { lattice, mass, .. } => {
                lattice.counts.iter().product::<usize>() as f64 * mass
            }
            MassDistribution::VoxelGrid(g) => g.mass(),
            MassDistribution::UniformShape(u) => u.rho * u.shape.volume(),
            MassDistribution::Composite(p) => p.iter().map(|u| u.rho * u.shape.volume()).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MassDistribution::GaussianCloud(sites) => {
                for s in sites {
                    if !(s.mass > 0.0 && s.sigma > 0.0 && s.mass.is_finite() && s.center.iter().all(|c| c.is_finite())) {
                        return Err(Error::invalid("Gaussian sites need positive mass and sigma"));
                    }
                }
            }
            MassDistribution::GaussianLattice { lattice, mass, sigma } => {
                if !(*mass > 0.0 && *sigma > 0.0 && lattice.spacing > 0.0) {
                    return Err(Error::invalid("lattice needs positive mass, sigma and spacing"));
                }
                if !(0.0..=0.1).contains(&lattice.jitter) {
                    return Err(Error::invalid("lattice jitter must lie in [0, 0.1]"));
                }
                if lattice.counts.iter().any(|c| *c == 0) {
                    return Err(Error::invalid("lattice counts must be positive"));
                }
            }
            MassDistribution::VoxelGrid(g) => {
                if !(g.h > 0.0 && g.h.is_finite()) {
                    return Err(Error::invalid("voxel size must be positive"));
                }
                if g.density.len() != g.dims.iter().product::<usize>() {
                    return Err(Error::invalid("voxel density length does not match dims"));
                }
                if g.density.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
                    return Err(Error::invalid("voxel densities must be finite and >= 0"));
                }
            }
            MassDistribution::UniformShape(u) => {
                u.shape.validate()?;
                if !(u.rho > 0.0 && u.rho.is_finite()) {
                    return Err(Error::invalid("shape density must be positive"));
                }
            }
            MassDistribution::Composite(parts) => {
                for u in parts {
                    MassDistribution::UniformShape(*u).validate()?;
                }
            }
        }
        if !self.is_empty() {
            let m = self.total_mass();
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::invalid("total mass must be positive and finite"));
            }
        }
        Ok(())
    }

    /// Gaussian sites of a cloud or lattice.
    pub(crate) fn sites(&self) -> Option<Vec<GaussianSite>> {
        match self {
            MassDistribution::GaussianCloud(s) => Some(s.clone()),
            MassDistribution::GaussianLattice { lattice, mass, sigma } => Some(
                lattice
                    .positions()
                    .into_iter()
                    .map(|center| GaussianSite { center, mass: *mass, sigma: *sigma })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Uniform parts of a shape or composite.
    pub(crate) fn parts(&self) -> Option<Vec<UniformShape>> {
        match self {
            MassDistribution::UniformShape(u) => Some(vec![*u]),
            MassDistribution::Composite(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// Rigid translation by `d`.
    pub fn translated(&self, d: Vec3) -> Result<MassDistribution> {
        Ok(match self {
            MassDistribution::GaussianCloud(sites) => MassDistribution::GaussianCloud(
                sites
                    .iter()
                    .map(|s| GaussianSite { center: [s.center[0] + d[0], s.center[1] + d[1], s.center[2] + d[2]], ..*s })
                    .collect(),
            ),
            MassDistribution::GaussianLattice { lattice, mass, sigma } => {
                let o = lattice.origin;
                MassDistribution::GaussianLattice {
                    lattice: LatticeSpec { origin: [o[0] + d[0], o[1] + d[1], o[2] + d[2]], ..*lattice },
                    mass: *mass,
                    sigma: *sigma,
                }
            }
            MassDistribution::VoxelGrid(g) => {
                let o = g.origin;
                MassDistribution::VoxelGrid(VoxelGrid { origin: [o[0] + d[0], o[1] + d[1], o[2] + d[2]], ..g.clone() })
            }
            MassDistribution::UniformShape(u) => {
                MassDistribution::UniformShape(UniformShape { shape: u.shape.translated(d), rho: u.rho })
            }
            MassDistribution::Composite(p) => MassDistribution::Composite(
                p.iter().map(|u| UniformShape { shape: u.shape.translated(d), rho: u.rho }).collect(),
            ),
        })
    }
}

/// Two states of the same body.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperposedPair {
    pub state1: MassDistribution,
    pub state2: MassDistribution,
}

impl SuperposedPair {
    pub fn new(state1: MassDistribution, state2: MassDistribution) -> Result<Self> {
        let p = SuperposedPair { state1, state2 };
        p.validate()?;
        Ok(p)
    }

    /// The pair of `dist` and its rigid translation by `d`.
    pub fn displaced(dist: &MassDistribution, d: Vec3) -> Result<Self> {
        SuperposedPair::new(dist.clone(), dist.translated(d)?)
    }

    pub fn swapped(&self) -> SuperposedPair {
        SuperposedPair { state1: self.state2.clone(), state2: self.state1.clone() }
    }

    pub fn translated(&self, d: Vec3) -> Result<SuperposedPair> {
        SuperposedPair::new(self.state1.translated(d)?, self.state2.translated(d)?)
    }

    pub fn is_empty(&self) -> bool {
        self.state1.is_empty() && self.state2.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.state1.validate()?;
        self.state2.validate()?;
        let (m1, m2) = (self.state1.total_mass(), self.state2.total_mass());
        let scale = m1.abs().max(m2.abs());
        if scale > 0.0 && (m1 - m2).abs() > 1e-9 * scale {
            return Err(Error::invalid(format!("states differ in mass: {m1:e} vs {m2:e} kg")));
        }
        if let (MassDistribution::VoxelGrid(a), MassDistribution::VoxelGrid(b)) = (&self.state1, &self.state2) {
            if !a.same_geometry(b) {
                return Err(Error::invalid("voxel states must share origin, cell size and dims"));
            }
        }
        Ok(())
    }
}
