//! Rasterisation of uniform shapes onto a common voxel grid.

use super::distribution::{Shape, UniformShape, Vec3};
use crate::numeric::gl20;

/// A shape with the sign of its state folded into the density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SignedPart {
    pub shape: Shape,
    pub rho: f64,
}

pub(crate) fn signed(state1: &[UniformShape], state2: &[UniformShape]) -> Vec<SignedPart> {
    state1
        .iter()
        .map(|u| SignedPart { shape: u.shape, rho: u.rho })
        .chain(state2.iter().map(|u| SignedPart { shape: u.shape, rho: -u.rho }))
        .collect()
}

pub(crate) fn min_feature(parts: &[SignedPart]) -> f64 {
    parts.iter().map(|p| p.shape.feature()).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Grid {
    pub origin: Vec3,
    pub h: f64,
    pub dims: [usize; 3],
}

impl Grid {
    #[inline]
    pub(crate) fn edge(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.h
    }

    pub(crate) fn len(&self) -> usize {
        self.dims.iter().product()
    }
}

/// Grid of spacing `h` covering every part with `pad` empty cells on each
/// side. Cell planes pass through the lower corner of the first part.
pub(crate) fn plan(parts: &[SignedPart], h: f64, pad: usize) -> Grid {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in parts {
        let (a, b) = p.shape.bounds();
        for ax in 0..3 {
            lo[ax] = lo[ax].min(a[ax]);
            hi[ax] = hi[ax].max(b[ax]);
        }
    }
    let anchor = parts[0].shape.bounds().0;
    let mut origin = [0.0; 3];
    let mut dims = [0usize; 3];
    for ax in 0..3 {
        let below = ((anchor[ax] - lo[ax]) / h - 1e-9).ceil().max(0.0) as usize;
        origin[ax] = anchor[ax] - (below + pad) as f64 * h;
        dims[ax] = ((hi[ax] - origin[ax]) / h - 1e-9).ceil() as usize + pad;
    }
    Grid { origin, h, dims }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Class {
    /// Boxes sharing one x-y footprint.
    Prism,
    /// Cylinders sharing one z extent.
    Rod,
    Dense,
}

pub(crate) fn classify(parts: &[SignedPart]) -> Class {
    let first = parts[0].shape;
    match first {
        Shape::Box { center, size } => {
            let same = parts.iter().all(|p| match p.shape {
                Shape::Box { center: c, size: s } => c[0] == center[0] && c[1] == center[1] && s[0] == size[0] && s[1] == size[1],
                _ => false,
            });
            if same {
                Class::Prism
            } else {
                Class::Dense
            }
        }
        Shape::Cylinder { center, length, .. } => {
            let same = parts.iter().all(|p| match p.shape {
                Shape::Cylinder { center: c, length: l, .. } => c[2] == center[2] && l == length,
                _ => false,
            });
            if same {
                Class::Rod
            } else {
                Class::Dense
            }
        }
        Shape::Sphere { .. } => Class::Dense,
    }
}

/// Δρ on a grid, stored separably where the geometry allows.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Layout {
    /// Δρ(i,j,k) = fx(i)·fy(j)·axial(k).
    Prism { fx: Vec<f64>, fy: Vec<f64>, axial: Vec<f64> },
    /// Δρ(i,j,k) = lateral(i,j)·axial(k).
    Rod { lateral: Vec<f64>, axial: Vec<f64> },
    Dense(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Field {
    pub grid: Grid,
    pub layout: Layout,
}

impl Field {
    pub(crate) fn dense(&self) -> Vec<f64> {
        let [nx, ny, nz] = self.grid.dims;
        match &self.layout {
            Layout::Dense(d) => d.clone(),
            Layout::Prism { fx, fy, axial } => {
                let mut out = Vec::with_capacity(nx * ny * nz);
                for x in fx {
                    for y in fy {
                        out.extend(axial.iter().map(|a| x * y * a));
                    }
                }
                out
            }
            Layout::Rod { lateral, axial } => {
                let mut out = Vec::with_capacity(nx * ny * nz);
                for l in lateral {
                    out.extend(axial.iter().map(|a| l * a));
                }
                out
            }
        }
    }
}

/// Length of [lo, hi] ∩ [a, b].
#[inline]
fn overlap(lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    (hi.min(b) - lo.max(a)).max(0.0)
}

fn axis_fractions(grid: &Grid, axis: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..grid.dims[axis])
        .map(|i| overlap(lo, hi, grid.edge(axis, i), grid.edge(axis, i + 1)) / grid.h)
        .collect()
}

/// Area of the disk of radius `r` at the origin inside [x0,x1]×[y0,y1].
pub(crate) fn disk_rect_area(r: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let a = x0.max(-r);
    let b = x1.min(r);
    if a >= b || y0 >= y1 {
        return 0.0;
    }
    let prim = |x: f64| {
        let u = (x / r).clamp(-1.0, 1.0);
        0.5 * r * r * (u * (1.0 - u * u).max(0.0).sqrt() + u.asin())
    };
    let mut cuts = [a, b, 0.0, 0.0, 0.0, 0.0];
    let mut n = 2;
    for y in [y0, y1] {
        if y.abs() < r {
            let x = (r * r - y * y).sqrt();
            for c in [-x, x] {
                if c > a && c < b {
                    cuts[n] = c;
                    n += 1;
                }
            }
        }
    }
    let cuts = &mut cuts[..n];
    cuts.sort_by(|p, q| p.total_cmp(q));
    let mut area = 0.0;
    for w in cuts.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q <= p {
            continue;
        }
        let m = 0.5 * (p + q);
        let s = (r * r - m * m).max(0.0).sqrt();
        let (top_curved, bot_curved) = (s < y1, -s > y0);
        let top = if top_curved { s } else { y1 };
        let bot = if bot_curved { -s } else { y0 };
        if top <= bot {
            continue;
        }
        let arc = prim(q) - prim(p);
        let t = if top_curved { arc } else { y1 * (q - p) };
        let u = if bot_curved { -arc } else { y0 * (q - p) };
        area += t - u;
    }
    area
}

/// Volume of the ball of radius `r` at the origin inside a box.
pub(crate) fn ball_box_volume(r: f64, lo: Vec3, hi: Vec3) -> f64 {
    let a = lo[0].max(-r);
    let b = hi[0].min(r);
    if a >= b {
        return 0.0;
    }
    let mut cuts = vec![a, b];
    let ys = [lo[1], hi[1]];
    let zs = [lo[2], hi[2]];
    let mut levels: Vec<f64> = Vec::with_capacity(8);
    for y in ys {
        levels.push(y * y);
        for z in zs {
            levels.push(y * y + z * z);
        }
    }
    for z in zs {
        levels.push(z * z);
    }
    for c in levels {
        if c < r * r {
            let x = (r * r - c).sqrt();
            for v in [-x, x] {
                if v > a && v < b {
                    cuts.push(v);
                }
            }
        }
    }
    cuts.sort_by(|p, q| p.total_cmp(q));
    let rule = gl20();
    let mut vol = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            vol += rule.integrate(w[0], w[1], |x| {
                let rr = (r * r - x * x).max(0.0).sqrt();
                disk_rect_area(rr, lo[1], hi[1], lo[2], hi[2])
            });
        }
    }
    vol
}

fn cell_range(grid: &Grid, axis: usize, lo: f64, hi: f64) -> std::ops::Range<usize> {
    let a = ((lo - grid.origin[axis]) / grid.h).floor().max(0.0) as usize;
    let b = (((hi - grid.origin[axis]) / grid.h).ceil().max(0.0) as usize).min(grid.dims[axis]);
    a.min(b)..b
}

/// Fraction of each lateral cell covered by a disk, row-major (i, j).
fn disk_fractions(grid: &Grid, center: Vec3, radius: f64) -> Vec<f64> {
    let [nx, ny, _] = grid.dims;
    let mut out = vec![0.0; nx * ny];
    let h2 = grid.h * grid.h;
    for i in cell_range(grid, 0, center[0] - radius, center[0] + radius) {
        for j in cell_range(grid, 1, center[1] - radius, center[1] + radius) {
            let x0 = grid.edge(0, i) - center[0];
            let y0 = grid.edge(1, j) - center[1];
            out[i * ny + j] = disk_rect_area(radius, x0, x0 + grid.h, y0, y0 + grid.h) / h2;
        }
    }
    out
}

fn add_dense(grid: &Grid, part: &SignedPart, data: &mut [f64]) {
    let [_, ny, nz] = grid.dims;
    let (lo, hi) = part.shape.bounds();
    let rx = cell_range(grid, 0, lo[0], hi[0]);
    let ry = cell_range(grid, 1, lo[1], hi[1]);
    let rz = cell_range(grid, 2, lo[2], hi[2]);
    let h = grid.h;
    match part.shape {
        Shape::Box { .. } => {
            let fx = axis_fractions(grid, 0, lo[0], hi[0]);
            let fy = axis_fractions(grid, 1, lo[1], hi[1]);
            let fz = axis_fractions(grid, 2, lo[2], hi[2]);
            for i in rx {
                for j in ry.clone() {
                    for k in rz.clone() {
                        data[(i * ny + j) * nz + k] += part.rho * fx[i] * fy[j] * fz[k];
                    }
                }
            }
        }
        Shape::Cylinder { center, radius, .. } => {
            let lat = disk_fractions(grid, center, radius);
            let fz = axis_fractions(grid, 2, lo[2], hi[2]);
            for i in rx {
                for j in ry.clone() {
                    let l = lat[i * ny + j];
                    if l == 0.0 {
                        continue;
                    }
                    for k in rz.clone() {
                        data[(i * ny + j) * nz + k] += part.rho * l * fz[k];
                    }
                }
            }
        }
        Shape::Sphere { center, radius } => {
            let vol = h * h * h;
            for i in rx {
                for j in ry.clone() {
                    for k in rz.clone() {
                        let a = [grid.edge(0, i) - center[0], grid.edge(1, j) - center[1], grid.edge(2, k) - center[2]];
                        let b = [a[0] + h, a[1] + h, a[2] + h];
                        let mut near = 0.0;
                        let mut far = 0.0;
                        for ax in 0..3 {
                            let n = if a[ax] > 0.0 { a[ax] } else if b[ax] < 0.0 { -b[ax] } else { 0.0 };
                            let f = a[ax].abs().max(b[ax].abs());
                            near += n * n;
                            far += f * f;
                        }
                        let occ = if far <= radius * radius {
                            1.0
                        } else if near >= radius * radius {
                            0.0
                        } else {
                            ball_box_volume(radius, a, b) / vol
                        };
                        data[(i * ny + j) * nz + k] += part.rho * occ;
                    }
                }
            }
        }
    }
}

/// Δρ of the parts on `grid`, stored according to `class`.
pub(crate) fn build(grid: &Grid, parts: &[SignedPart], class: Class) -> Field {
    let layout = match class {
        Class::Prism => {
            let (lo, hi) = parts[0].shape.bounds();
            let fx = axis_fractions(grid, 0, lo[0], hi[0]);
            let fy = axis_fractions(grid, 1, lo[1], hi[1]);
            let mut axial = vec![0.0; grid.dims[2]];
            for p in parts {
                let (l, u) = p.shape.bounds();
                for (a, f) in axial.iter_mut().zip(axis_fractions(grid, 2, l[2], u[2])) {
                    *a += p.rho * f;
                }
            }
            Layout::Prism { fx, fy, axial }
        }
        Class::Rod => {
            let (lo, hi) = parts[0].shape.bounds();
            let axial = axis_fractions(grid, 2, lo[2], hi[2]);
            let mut lateral = vec![0.0; grid.dims[0] * grid.dims[1]];
            for p in parts {
                if let Shape::Cylinder { center, radius, .. } = p.shape {
                    for (l, f) in lateral.iter_mut().zip(disk_fractions(grid, center, radius)) {
                        *l += p.rho * f;
                    }
                }
            }
            Layout::Rod { lateral, axial }
        }
        Class::Dense => {
            let mut data = vec![0.0; grid.len()];
            for p in parts {
                add_dense(grid, p, &mut data);
            }
            Layout::Dense(data)
        }
    };
    Field { grid: *grid, layout }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn disk_area_pieces() {
        assert_relative_eq!(disk_rect_area(1.0, -2.0, 2.0, -2.0, 2.0), PI, max_relative = 1e-14);
        assert_relative_eq!(disk_rect_area(1.0, 0.0, 2.0, 0.0, 2.0), PI / 4.0, max_relative = 1e-14);
        assert_relative_eq!(disk_rect_area(1.0, -2.0, 2.0, 0.5, 2.0), PI / 3.0 - 0.75f64.sqrt() / 2.0, max_relative = 1e-13);
        assert_eq!(disk_rect_area(1.0, 0.8, 2.0, 0.8, 2.0), 0.0);
        // Square inside the disk.
        assert_relative_eq!(disk_rect_area(1.0, -0.5, 0.5, -0.5, 0.5), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn ball_volume_pieces() {
        let v = ball_box_volume(1.0, [-2.0; 3], [2.0; 3]);
        assert_relative_eq!(v, 4.0 * PI / 3.0, max_relative = 1e-12);
        let oct = ball_box_volume(1.0, [0.0; 3], [2.0; 3]);
        assert_relative_eq!(oct, PI / 6.0, max_relative = 1e-12);
        // Spherical cap of height 0.5.
        let cap = ball_box_volume(1.0, [0.5, -2.0, -2.0], [2.0, 2.0, 2.0]);
        assert_relative_eq!(cap, PI * 0.25 * (3.0 - 0.5) / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn rasterised_sphere_keeps_its_mass() {
        let s = SignedPart { shape: Shape::Sphere { center: [0.1, 0.2, 0.3], radius: 1.0 }, rho: 2.0 };
        let grid = plan(&[s], 0.13, 1);
        let f = build(&grid, &[s], Class::Dense);
        let m: f64 = f.dense().iter().sum::<f64>() * grid.h.powi(3);
        assert_relative_eq!(m, 2.0 * 4.0 * PI / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn layouts_agree() {
        let a = SignedPart { shape: Shape::Box { center: [0.0; 3], size: [1.0, 1.0, 0.3] }, rho: 1.0 };
        let b = SignedPart { shape: Shape::Box { center: [0.0, 0.0, 0.05], size: [1.0, 1.0, 0.3] }, rho: -1.0 };
        let grid = plan(&[a, b], 0.1, 1);
        assert_eq!(classify(&[a, b]), Class::Prism);
        let p = build(&grid, &[a, b], Class::Prism).dense();
        let d = build(&grid, &[a, b], Class::Dense).dense();
        for (x, y) in p.iter().zip(&d) {
            assert!((x - y).abs() < 1e-12);
        }
        let c = SignedPart { shape: Shape::Cylinder { center: [0.0; 3], radius: 0.4, length: 2.0 }, rho: 1.0 };
        let e = SignedPart { shape: Shape::Cylinder { center: [0.0; 3], radius: 0.44, length: 2.0 }, rho: -1.0 / 1.21 };
        assert_eq!(classify(&[c, e]), Class::Rod);
        let grid = plan(&[c, e], 0.1, 1);
        let r = build(&grid, &[c, e], Class::Rod).dense();
        let d = build(&grid, &[c, e], Class::Dense).dense();
        for (x, y) in r.iter().zip(&d) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_is_centred_on_symmetric_bodies() {
        let a = SignedPart { shape: Shape::Sphere { center: [0.0; 3], radius: 1.0 }, rho: 1.0 };
        let b = SignedPart { shape: Shape::Sphere { center: [0.0; 3], radius: 1.1 }, rho: -1.0 / 1.331 };
        let g = plan(&[a, b], 0.1, 1);
        for ax in 0..3 {
            let mid = g.origin[ax] + 0.5 * g.dims[ax] as f64 * g.h;
            assert!(mid.abs() < 1e-9);
        }
    }
}
