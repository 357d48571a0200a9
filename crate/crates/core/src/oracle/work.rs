//! Work needed to pull a body away from its own superposed copy.

use super::distribution::{MassDistribution, Vec3};
use super::grid::{build, classify, plan, signed, Grid};
use super::kernel::cube_attraction;
use super::{sites, Estimate, QuadratureSpec};
use crate::constants::G;
use crate::error::{Error, Result};
use crate::numeric::composite;

/// W = ∫₀^|ds| F(s) ds, the work against the mutual attraction of `dist`
/// and its copy as the copy is pulled rigidly along `ds`.
///
/// Uniform shapes and voxel grids are summed as uniform cubes; the estimate
/// is extrapolated from two cell sizes.
pub fn separation_work(dist: &MassDistribution, ds: Vec3, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    dist.validate()?;
    let len = (ds[0] * ds[0] + ds[1] * ds[1] + ds[2] * ds[2]).sqrt();
    if !len.is_finite() {
        return Err(Error::invalid("displacement must be finite"));
    }
    if len == 0.0 || dist.is_empty() {
        return Ok(Estimate::exact(0.0));
    }
    let e = [ds[0] / len, ds[1] / len, ds[2] / len];
    if let Some(s) = dist.sites() {
        let sigma = s.iter().map(|x| x.sigma).fold(f64::INFINITY, f64::min);
        let panels = ((len / sigma).ceil() as usize).clamp(2, 64);
        let w = -G * composite(0.0, len, panels, |t| sites::mutual_slope(&s, e, t));
        return Ok(Estimate::exact(w));
    }
    let (fine, coarse) = match dist {
        MassDistribution::VoxelGrid(g) => {
            let c = g.coarsen();
            (
                cell_work(&Cells::new(g.h, g.dims, &g.density), e, len),
                cell_work(&Cells::new(c.h, c.dims, &c.density), e, len),
            )
        }
        _ => {
            let parts = signed(&dist.parts().expect("shape variants"), &[]);
            let h = super::cell_size(&parts, q.resolution);
            let at = |h: f64| {
                let grid = plan(&parts, h, 0);
                let field = build(&grid, &parts, classify(&parts));
                cell_work(&Cells::from_grid(&grid, &field.dense()), e, len)
            };
            (at(h), at(2.0 * h))
        }
    };
    Ok(Estimate::richardson(fine, coarse, q.target_rel_err))
}

/// Cell masses on an integer lattice of spacing h.
struct Cells {
    h: f64,
    dims: [usize; 3],
    mass: Vec<f64>,
}

impl Cells {
    fn new(h: f64, dims: [usize; 3], density: &[f64]) -> Self {
        let v = h * h * h;
        Cells { h, dims, mass: density.iter().map(|d| d * v).collect() }
    }

    fn from_grid(grid: &Grid, density: &[f64]) -> Self {
        Cells::new(grid.h, grid.dims, density)
    }

    /// A(δ) = Σ_i m_i·m_{i+δ} over integer offsets, as (offset, value).
    fn autocorrelation(&self) -> Vec<([f64; 3], f64)> {
        let [nx, ny, nz] = self.dims;
        let (wx, wy, wz) = (2 * nx - 1, 2 * ny - 1, 2 * nz - 1);
        let mut acc = vec![0.0; wx * wy * wz];
        let occupied: Vec<(usize, usize, usize, f64)> = (0..nx * ny * nz)
            .filter(|&i| self.mass[i] != 0.0)
            .map(|i| (i / (ny * nz), (i / nz) % ny, i % nz, self.mass[i]))
            .collect();
        for &(i, j, k, m) in &occupied {
            for &(p, q, r, n) in &occupied {
                acc[((p + nx - 1 - i) * wy + (q + ny - 1 - j)) * wz + (r + nz - 1 - k)] += m * n;
            }
        }
        acc.iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(idx, v)| {
                let dx = (idx / (wy * wz)) as f64 - (nx as f64 - 1.0);
                let dy = ((idx / wz) % wy) as f64 - (ny as f64 - 1.0);
                let dz = (idx % wz) as f64 - (nz as f64 - 1.0);
                ([dx, dy, dz], *v)
            })
            .collect()
    }
}

/// Offsets (cells, max-norm) below which the cube-cube force is integrated
/// exactly; beyond, cubes act as points.
const NEAR: f64 = 3.0;

/// Gauss-Legendre nodes and weights of order 4 on [lo, hi], split at the
/// source-cube faces ±½.
fn axis_rule(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    const X: [f64; 2] = [0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
    const W: [f64; 2] = [0.652_145_154_862_546_1, 0.347_854_845_137_453_9];
    let mut cuts = vec![lo];
    for f in [-0.5, 0.5] {
        if f > lo && f < hi {
            cuts.push(f);
        }
    }
    cuts.push(hi);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (m, r) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for i in 0..2 {
            out.push((m - r * X[i], r * W[i]));
            out.push((m + r * X[i], r * W[i]));
        }
    }
    out
}

/// e·∇ of the mutual potential of two unit cubes at offset `v` (cells).
fn cube_pair_slope(v: Vec3, e: Vec3) -> f64 {
    if v[0].abs() > NEAR || v[1].abs() > NEAR || v[2].abs() > NEAR {
        let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        return -(v[0] * e[0] + v[1] * e[1] + v[2] * e[2]) / (r2 * r2.sqrt());
    }
    let rules: Vec<Vec<(f64, f64)>> = (0..3).map(|a| axis_rule(v[a] - 0.5, v[a] + 0.5)).collect();
    let mut total = 0.0;
    for &(x, wx) in &rules[0] {
        for &(y, wy) in &rules[1] {
            for &(z, wz) in &rules[2] {
                let g = cube_attraction([x, y, z]);
                total += wx * wy * wz * (g[0] * e[0] + g[1] * e[1] + g[2] * e[2]);
            }
        }
    }
    total
}

/// Work to separate the voxelised body from its rigidly shifted copy, with
/// every cell a uniform cube.
fn cell_work(cells: &Cells, e: Vec3, len: f64) -> f64 {
    let h = cells.h;
    let pairs = cells.autocorrelation();
    let slope = |s: f64| {
        let t = s / h;
        let mut total = 0.0;
        for (d, a) in &pairs {
            let v = [d[0] + t * e[0], d[1] + t * e[1], d[2] + t * e[2]];
            total += a * cube_pair_slope(v, e);
        }
        total / (h * h)
    };
    // Panels end on whole cells so the kinks of the cube force sit on edges.
    let mut edges = vec![0.0];
    let mut k = 1.0;
    while k * h < len {
        edges.push(k * h);
        k += 1.0;
    }
    edges.push(len);
    -G * edges.windows(2).map(|w| composite(w[0], w[1], 1, slope)).sum::<f64>()
}
