//! Pair sums Σ a_i b_j K(i − j) over voxel fields, in cell units.

use super::grid::{Field, Layout};
use super::kernel::VoxelKernel;
use super::symmetry::{invariant_ops, orbits, Op};
use std::collections::BTreeMap;

/// Σ_i a_i b_j K(i − j) over all cell pairs. Both fields must live on the
/// same grid with the same layout kind (and, for prisms, the same footprint).
pub(crate) fn cross_sum(a: &Field, b: &Field, kernel: &VoxelKernel, use_symmetry: bool) -> f64 {
    assert_eq!(a.grid, b.grid, "fields must share a grid");
    match (&a.layout, &b.layout) {
        (Layout::Prism { fx, fy, axial: za }, Layout::Prism { fx: gx, fy: gy, axial: zb }) if fx == gx && fy == gy => {
            prism_sum(fx, fy, za, zb, kernel)
        }
        (Layout::Rod { lateral: la, axial: za }, Layout::Rod { lateral: lb, axial: zb }) if za == zb => {
            rod_sum(a.grid.dims, la, lb, za, kernel)
        }
        _ => dense_sum(a.grid.dims, &a.dense(), &b.dense(), kernel, use_symmetry),
    }
}

/// c(δ) = Σ_i f(i)·g(i + δ) for δ in (−n, n), stored at δ + n − 1.
fn correlate(f: &[f64], g: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; 2 * n - 1];
    for (i, &fi) in f.iter().enumerate() {
        if fi == 0.0 {
            continue;
        }
        for (j, &gj) in g.iter().enumerate() {
            out[j + n - 1 - i] += fi * gj;
        }
    }
    out
}

/// Σ_{d ≥ 0} w(d)·c(d)/√(d² + c0) with w = 1 at d = 0 and 2 beyond; the
/// d = 0 term is skipped when `skip_zero`.
#[inline]
fn line_sum(c: &[f64], c0: f64, skip_zero: bool) -> f64 {
    let mut acc = [0.0f64; 4];
    let start = 1;
    let body = &c[start..];
    let chunks = body.len() / 4;
    for q in 0..chunks {
        for l in 0..4 {
            let d = (start + 4 * q + l) as f64;
            acc[l] += body[4 * q + l] / (d * d + c0).sqrt();
        }
    }
    for (off, v) in body[4 * chunks..].iter().enumerate() {
        let d = (start + 4 * chunks + off) as f64;
        acc[0] += v / (d * d + c0).sqrt();
    }
    let tail = 2.0 * ((acc[0] + acc[1]) + (acc[2] + acc[3]));
    if skip_zero {
        tail
    } else {
        tail + c[0] / c0.sqrt()
    }
}

fn prism_sum(fx: &[f64], fy: &[f64], za: &[f64], zb: &[f64], kernel: &VoxelKernel) -> f64 {
    prism_sums(fx, fy, &[(za, zb)], kernel)[0]
}

/// Several prism sums sharing one footprint; the lateral sums T(δz) are
/// computed once for all pairs.
fn prism_sums(fx: &[f64], fy: &[f64], axial: &[(&[f64], &[f64])], kernel: &VoxelKernel) -> Vec<f64> {
    let cx_full = correlate(fx, fx);
    let cy_full = correlate(fy, fy);
    let cx = &cx_full[fx.len() - 1..];
    let cy = &cy_full[fy.len() - 1..];
    let square = fx == fy;
    let eps2 = kernel.softening();
    let mut tz: BTreeMap<usize, f64> = BTreeMap::new();
    axial
        .iter()
        .map(|(za, zb)| {
            let nz = za.len();
            let cz = correlate(za, zb);
            let mut total = 0.0;
            for (idx, &c) in cz.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let dz = (idx as i64 - (nz as i64 - 1)).unsigned_abs() as usize;
                let t = *tz.entry(dz).or_insert_with(|| lateral_sum(cx, cy, (dz * dz) as f64, eps2, square, kernel));
                total += c * t;
            }
            total
        })
        .collect()
}

/// [`cross_sum`] for several field pairs on one grid, sharing lateral sums
/// when every field is a prism with the same footprint.
pub(crate) fn cross_sums(pairs: &[(&Field, &Field)], kernel: &VoxelKernel, use_symmetry: bool) -> Vec<f64> {
    let footprint = |f: &Field| match &f.layout {
        Layout::Prism { fx, fy, .. } => Some((fx.clone(), fy.clone())),
        _ => None,
    };
    if let Some(Some(fp)) = pairs.first().map(|p| footprint(p.0)) {
        let shared = pairs.iter().all(|(a, b)| {
            a.grid == b.grid && footprint(a).as_ref() == Some(&fp) && footprint(b).as_ref() == Some(&fp)
        });
        if shared {
            let axial: Vec<(&[f64], &[f64])> = pairs
                .iter()
                .map(|(a, b)| match (&a.layout, &b.layout) {
                    (Layout::Prism { axial: x, .. }, Layout::Prism { axial: y, .. }) => (x.as_slice(), y.as_slice()),
                    _ => unreachable!(),
                })
                .collect();
            return prism_sums(&fp.0, &fp.1, &axial, kernel);
        }
    }
    pairs.iter().map(|(a, b)| cross_sum(a, b, kernel, use_symmetry)).collect()
}

/// T = Σ_{δx,δy} cx(|δx|)·cy(|δy|)·K(δx² + δy² + dz2).
fn lateral_sum(cx: &[f64], cy: &[f64], dz2: f64, eps2: f64, square: bool, kernel: &VoxelKernel) -> f64 {
    let mut total = 0.0;
    for (dy, &wy) in cy.iter().enumerate() {
        if wy == 0.0 {
            continue;
        }
        let c0 = (dy * dy) as f64 + dz2 + eps2;
        let row = if square {
            // Sum over dx ≥ dy only, doubling off-diagonal terms for the swap.
            let tail = &cx[dy..];
            let mut acc = [0.0f64; 4];
            let body = &tail[1.min(tail.len())..];
            let chunks = body.len() / 4;
            for q in 0..chunks {
                for l in 0..4 {
                    let d = (dy + 1 + 4 * q + l) as f64;
                    acc[l] += body[4 * q + l] / (d * d + c0).sqrt();
                }
            }
            for (off, v) in body[4 * chunks..].iter().enumerate() {
                let d = (dy + 1 + 4 * chunks + off) as f64;
                acc[0] += v / (d * d + c0).sqrt();
            }
            let off_diag = 2.0 * ((acc[0] + acc[1]) + (acc[2] + acc[3]));
            let diag_r2 = (dy * dy) as f64 + c0 - eps2;
            let diag = cx[dy] * kernel.eval(diag_r2);
            // Sign multiplicity in x, then the swap.
            let wx_diag = if dy == 0 { 1.0 } else { 2.0 };
            2.0 * off_diag + wx_diag * diag
        } else {
            if c0 == eps2 {
                line_sum(cx, c0, true) + cx[0] * kernel.self_term()
            } else {
                line_sum(cx, c0, false)
            }
        };
        let wy_mult = if dy == 0 { 1.0 } else { 2.0 };
        total += wy_mult * wy * row;
    }
    total
}

fn rod_sum(dims: [usize; 3], la: &[f64], lb: &[f64], axial: &[f64], kernel: &VoxelKernel) -> f64 {
    let [nx, ny, _] = dims;
    let (wx, wy) = (2 * nx - 1, 2 * ny - 1);
    let mut clat = vec![0.0; wx * wy];
    for i in 0..nx {
        for j in 0..ny {
            let a = la[i * ny + j];
            if a == 0.0 {
                continue;
            }
            for p in 0..nx {
                for q in 0..ny {
                    let b = lb[p * ny + q];
                    if b != 0.0 {
                        clat[(p + nx - 1 - i) * wy + (q + ny - 1 - j)] += a * b;
                    }
                }
            }
        }
    }
    let cz_full = correlate(axial, axial);
    let cz = &cz_full[axial.len() - 1..];
    let eps2 = kernel.softening();
    let mut zcache: BTreeMap<u64, f64> = BTreeMap::new();
    let mut total = 0.0;
    for (idx, &c) in clat.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let dx = (idx / wy) as i64 - (nx as i64 - 1);
        let dy = (idx % wy) as i64 - (ny as i64 - 1);
        let r2 = (dx * dx + dy * dy) as u64;
        let z = *zcache.entry(r2).or_insert_with(|| {
            if r2 == 0 {
                line_sum(cz, eps2, true) + cz[0] * kernel.self_term()
            } else {
                line_sum(cz, r2 as f64 + eps2, false)
            }
        });
        total += c * z;
    }
    total
}

fn dense_sum(dims: [usize; 3], a: &[f64], b: &[f64], kernel: &VoxelKernel, use_symmetry: bool) -> f64 {
    let ops: Vec<Op> = if use_symmetry { invariant_ops(dims, &[a, b], 1e-12) } else { vec![Op::IDENTITY] };
    let reps = orbits(dims, &ops, |i| a[i] != 0.0);
    let [_, ny, nz] = dims;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut zs = Vec::new();
    let mut ws = Vec::new();
    for (idx, &w) in b.iter().enumerate() {
        if w != 0.0 {
            xs.push((idx / (ny * nz)) as f64);
            ys.push(((idx / nz) % ny) as f64);
            zs.push((idx % nz) as f64);
            ws.push(w);
        }
    }
    let eps2 = kernel.softening();
    let self_fix = kernel.self_term() - 1.0 / (1.0 + eps2).sqrt();
    let n = ws.len();
    let chunks = n / 4;
    let mut total = 0.0;
    for (idx, mult) in reps {
        let x = (idx / (ny * nz)) as f64;
        let y = ((idx / nz) % ny) as f64;
        let z = (idx % nz) as f64;
        let mut acc = [0.0f64; 4];
        for q in 0..chunks {
            for l in 0..4 {
                let s = 4 * q + l;
                let (dx, dy, dz) = (xs[s] - x, ys[s] - y, zs[s] - z);
                let r2 = (dx * dx + dy * dy + dz * dz).max(1.0);
                acc[l] += ws[s] / (r2 + eps2).sqrt();
            }
        }
        for s in 4 * chunks..n {
            let (dx, dy, dz) = (xs[s] - x, ys[s] - y, zs[s] - z);
            let r2 = (dx * dx + dy * dy + dz * dz).max(1.0);
            acc[0] += ws[s] / (r2 + eps2).sqrt();
        }
        let mut phi = (acc[0] + acc[1]) + (acc[2] + acc[3]);
        if b[idx] != 0.0 {
            phi += b[idx] * self_fix;
        }
        total += mult * a[idx] * phi;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::super::grid::{build, classify, plan, Class, SignedPart};
    use super::super::kernel::SelfCell;
    use super::super::distribution::Shape;
    use super::*;
    use approx::assert_relative_eq;

    fn parts_box_pair() -> Vec<SignedPart> {
        vec![
            SignedPart { shape: Shape::Box { center: [0.0; 3], size: [0.8, 0.8, 0.3] }, rho: 1.0 },
            SignedPart { shape: Shape::Box { center: [0.0, 0.0, 0.1], size: [0.8, 0.8, 0.3] }, rho: -1.0 },
        ]
    }

    #[test]
    fn separable_paths_match_dense() {
        let k = VoxelKernel::new(SelfCell::AnalyticCube, 0.1);
        let parts = parts_box_pair();
        let grid = plan(&parts, 0.1, 1);
        let p = build(&grid, &parts, Class::Prism);
        let d = build(&grid, &parts, Class::Dense);
        let ep = cross_sum(&p, &p, &k, true);
        let ed = cross_sum(&d, &d, &k, false);
        assert_relative_eq!(ep, ed, max_relative = 1e-12);

        let rods = vec![
            SignedPart { shape: Shape::Cylinder { center: [0.0; 3], radius: 0.3, length: 1.0 }, rho: 1.0 },
            SignedPart { shape: Shape::Cylinder { center: [0.0; 3], radius: 0.35, length: 1.0 }, rho: -0.09 / 0.1225 },
        ];
        assert_eq!(classify(&rods), Class::Rod);
        let grid = plan(&rods, 0.1, 1);
        let r = build(&grid, &rods, Class::Rod);
        let d = build(&grid, &rods, Class::Dense);
        assert_relative_eq!(cross_sum(&r, &r, &k, true), cross_sum(&d, &d, &k, false), max_relative = 1e-11);
    }

    #[test]
    fn symmetry_reduction_is_exact() {
        let k = VoxelKernel::new(SelfCell::AnalyticCube, 0.1);
        let parts = vec![
            SignedPart { shape: Shape::Sphere { center: [0.0; 3], radius: 0.5 }, rho: 1.0 },
            SignedPart { shape: Shape::Sphere { center: [0.0; 3], radius: 0.55 }, rho: -1.0 / 1.331 },
        ];
        let grid = plan(&parts, 0.1, 1);
        let d = build(&grid, &parts, Class::Dense);
        assert_relative_eq!(cross_sum(&d, &d, &k, true), cross_sum(&d, &d, &k, false), max_relative = 1e-10);
    }

    #[test]
    fn plummer_softening_lowers_the_sum() {
        let parts = parts_box_pair();
        let grid = plan(&parts, 0.1, 1);
        let p = build(&grid, &parts, Class::Prism);
        let exact = cross_sum(&p, &p, &VoxelKernel::new(SelfCell::AnalyticCube, 0.1), true);
        let soft = cross_sum(&p, &p, &VoxelKernel::new(SelfCell::Plummer(0.1), 0.1), true);
        assert!(soft < exact);
    }
}
