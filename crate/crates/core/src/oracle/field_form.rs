//! The energy as the field integral (1/8πG)∫|g₁ − g₂|².

use super::grid::{signed, Field};
use super::kernel::cube_attraction;
use super::symmetry::{invariant_ops, linear, orbits, Op};
use super::{cell_size, pair_kind, shape_field, voxel_field, Estimate, PairKind, QuadratureSpec, SuperposedPair};
use crate::constants::G;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Empty cells of uniform width around the source grid.
const PAD: usize = 2;
/// Growth factor of the outer cell widths.
const GROWTH: f64 = 1.25;
/// Offsets (cells, max-norm) below which the exact cube field is used.
const NEAR: f64 = 2.5;
const FIRST_MARGIN: f64 = 4.0;
const MAX_MARGIN: f64 = 256.0;

/// Field form of the Diósi-Penrose energy for uniform shapes or voxel grids.
///
/// The field of the density difference is evaluated at two Gauss points per
/// cell on the source grid, a padding layer, and geometrically growing outer
/// cells. The outer extent is doubled until the energy changes by less than
/// half the target error.
pub fn dp_energy_field_form(pair: &SuperposedPair, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    pair.validate()?;
    if pair.state1 == pair.state2 {
        return Ok(Estimate::exact(0.0));
    }
    let (fine, coarse) = match pair_kind(pair)? {
        PairKind::Empty => return Ok(Estimate::exact(0.0)),
        PairKind::Shapes(a, b) => {
            let parts = signed(&a, &b);
            let h = cell_size(&parts, q.resolution);
            (shape_field(&parts, h), shape_field(&parts, 2.0 * h))
        }
        PairKind::Voxels(a, b) => (voxel_field(&a, &b), voxel_field(&a.coarsen(), &b.coarsen())),
        PairKind::Sites(..) => return Err(Error::invalid("the field form needs uniform shapes or voxel grids")),
    };
    let ef = converged_field_energy(&fine, q.target_rel_err)?;
    let ec = converged_field_energy(&coarse, q.target_rel_err)?;
    Ok(Estimate::richardson(ef, ec, q.target_rel_err))
}

fn converged_field_energy(field: &Field, target: f64) -> Result<f64> {
    let mut margin = FIRST_MARGIN;
    let mut last = field_energy(field, margin);
    while margin < MAX_MARGIN {
        margin *= 2.0;
        let next = field_energy(field, margin);
        if (next - last).abs() <= 0.5 * target * next.abs() {
            return Ok(next);
        }
        last = next;
    }
    Err(Error::Numerical(format!("field integral not converged at {MAX_MARGIN}× the body size")))
}

/// Gauss nodes and weights along one axis, in cell units, symmetric about
/// the grid centre n/2.
fn axis_nodes(n: usize, extent: f64) -> (Vec<f64>, Vec<f64>) {
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let lo0 = -(PAD as f64);
    for i in 0..n + 2 * PAD {
        cells.push((lo0 + i as f64, 1.0));
    }
    let mut outer = Vec::new();
    let mut w = GROWTH;
    let mut reach = PAD as f64;
    while reach < extent {
        outer.push(w);
        reach += w;
        w *= GROWTH;
    }
    let mut left = Vec::new();
    let mut edge = lo0;
    for &w in &outer {
        edge -= w;
        left.push((edge, w));
    }
    left.reverse();
    let mut right = Vec::new();
    let mut edge = n as f64 + PAD as f64;
    for &w in &outer {
        right.push((edge, w));
        edge += w;
    }
    let all: Vec<(f64, f64)> = left.into_iter().chain(cells).chain(right).collect();
    let g = 0.5 / 3f64.sqrt();
    let mut x = Vec::with_capacity(2 * all.len());
    let mut wt = Vec::with_capacity(2 * all.len());
    for (lo, w) in all {
        let mid = lo + 0.5 * w;
        x.push(mid - g * w);
        x.push(mid + g * w);
        wt.push(0.5 * w);
        wt.push(0.5 * w);
    }
    (x, wt)
}

fn field_energy(field: &Field, margin: f64) -> f64 {
    let grid = field.grid;
    let dims = grid.dims;
    let rho = field.dense();
    let ops: Vec<Op> = invariant_ops(dims, &[&rho], 1e-12);
    let size = dims.iter().copied().max().unwrap_or(1) as f64;
    let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..3).map(|a| axis_nodes(dims[a], margin * size)).collect();
    let pdims = [axes[0].0.len(), axes[1].0.len(), axes[2].0.len()];
    let [_, ny, nz] = dims;
    let sources: Vec<([f64; 3], f64)> = rho
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, v)| ([(i / (ny * nz)) as f64 + 0.5, ((i / nz) % ny) as f64 + 0.5, (i % nz) as f64 + 0.5], *v))
        .collect();
    let reps = orbits(pdims, &ops, |_| true);
    let mut total = 0.0;
    for (idx, mult) in reps {
        let pi = [idx / (pdims[1] * pdims[2]), (idx / pdims[2]) % pdims[1], idx % pdims[2]];
        debug_assert_eq!(linear(pdims, pi), idx);
        let p = [axes[0].0[pi[0]], axes[1].0[pi[1]], axes[2].0[pi[2]]];
        let w = axes[0].1[pi[0]] * axes[1].1[pi[1]] * axes[2].1[pi[2]];
        let mut g = [0.0; 3];
        for (c, r) in &sources {
            let d = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
            if d[0].abs() <= NEAR && d[1].abs() <= NEAR && d[2].abs() <= NEAR {
                let a = cube_attraction(d);
                for ax in 0..3 {
                    g[ax] += r * a[ax];
                }
            } else {
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let s = r / (r2 * r2.sqrt());
                for ax in 0..3 {
                    g[ax] -= s * d[ax];
                }
            }
        }
        total += mult * w * (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    }
    G * grid.h.powi(5) / (8.0 * PI) * total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_nodes_are_symmetric() {
        let (x, w) = axis_nodes(5, 20.0);
        let n = x.len();
        for i in 0..n {
            assert!((x[i] + x[n - 1 - i] - 5.0).abs() < 1e-9);
            assert!((w[i] - w[n - 1 - i]).abs() < 1e-12);
        }
        assert!(x[0] < -20.0 + 2.5 && x[0] > -40.0);
    }
}
