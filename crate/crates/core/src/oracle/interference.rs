//! Cross terms between the density differences of two superposed solids.

use super::grid::{build, classify, plan, signed, SignedPart};
use super::{cell_size, field_energies, field_energy, pair_kind, sites, voxel_field, Estimate, PairKind, QuadratureSpec, SuperposedPair};
use crate::constants::G;
use crate::error::{Error, Result};

/// Energies of a combination of solids A and B. The combination's energy is
/// `e_a + e_b + e_ab + e_ba`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interference {
    /// (G/2)∬ΔρA(x)ΔρB(y)/|x − y|.
    pub e_ab: Estimate,
    /// (G/2)∬ΔρB(x)ΔρA(y)/|x − y|, summed in the opposite order.
    pub e_ba: Estimate,
    pub e_a: Estimate,
    pub e_b: Estimate,
    /// Energy of the combined density difference.
    pub e_total: Estimate,
}

impl Interference {
    /// |E_AB + E_BA| / (E_A + E_B).
    pub fn relative_magnitude(&self) -> f64 {
        (self.e_ab.value + self.e_ba.value).abs() / (self.e_a.value + self.e_b.value)
    }
}

pub fn interference_terms(a: &SuperposedPair, b: &SuperposedPair, q: &QuadratureSpec) -> Result<Interference> {
    q.validate()?;
    a.validate()?;
    b.validate()?;
    let ka = pair_kind(a)?;
    let kb = pair_kind(b)?;
    match (ka, kb) {
        (PairKind::Empty, _) | (_, PairKind::Empty) => {
            let ea = super::dp_energy(a, q)?;
            let eb = super::dp_energy(b, q)?;
            let zero = Estimate::exact(0.0);
            let total = Estimate::exact(ea.value + eb.value);
            Ok(Interference { e_ab: zero, e_ba: zero, e_a: ea, e_b: eb, e_total: total })
        }
        (PairKind::Sites(a1, a2), PairKind::Sites(b1, b2)) => {
            let z = [0.0; 3];
            let cross = |x1: &[_], x2: &[_], y1: &[_], y2: &[_]| {
                0.5 * G
                    * (sites::mutual(x1, y1, z) - sites::mutual(x1, y2, z) - sites::mutual(x2, y1, z)
                        + sites::mutual(x2, y2, z))
            };
            let e_ab = cross(&a1, &a2, &b1, &b2);
            let e_ba = cross(&b1, &b2, &a1, &a2);
            let e_a = 0.5 * G * sites::self_energy_sum(&a1, &a2);
            let e_b = 0.5 * G * sites::self_energy_sum(&b1, &b2);
            let u1: Vec<_> = a1.iter().chain(&b1).copied().collect();
            let u2: Vec<_> = a2.iter().chain(&b2).copied().collect();
            let e_total = 0.5 * G * sites::self_energy_sum(&u1, &u2);
            Ok(Interference {
                e_ab: Estimate::exact(e_ab),
                e_ba: Estimate::exact(e_ba),
                e_a: Estimate::exact(e_a),
                e_b: Estimate::exact(e_b),
                e_total: Estimate::exact(e_total),
            })
        }
        (PairKind::Shapes(a1, a2), PairKind::Shapes(b1, b2)) => {
            let pa = signed(&a1, &a2);
            let pb = signed(&b1, &b2);
            let all: Vec<SignedPart> = pa.iter().chain(&pb).copied().collect();
            let h = cell_size(&all, q.resolution);
            let fine = shape_terms(&pa, &pb, &all, h, q);
            let coarse = shape_terms(&pa, &pb, &all, 2.0 * h, q);
            let r = |i: usize| Estimate::richardson(fine[i], coarse[i], q.target_rel_err);
            Ok(Interference { e_ab: r(0), e_ba: r(1), e_a: r(2), e_b: r(3), e_total: r(4) })
        }
        (PairKind::Voxels(a1, a2), PairKind::Voxels(b1, b2)) => {
            if a1.dims != b1.dims || a1.h != b1.h || a1.origin != b1.origin {
                return Err(Error::invalid("voxel pairs must share one grid"));
            }
            let terms = |fa: &super::grid::Field, fb: &super::grid::Field, ft: &super::grid::Field| {
                [field_energy(fa, fb, q), field_energy(fb, fa, q), field_energy(fa, fa, q), field_energy(fb, fb, q), field_energy(ft, ft, q)]
            };
            let union = |x: &super::VoxelGrid, y: &super::VoxelGrid| {
                let mut u = x.clone();
                for (d, v) in u.density.iter_mut().zip(&y.density) {
                    *d += v;
                }
                u
            };
            let fine = terms(&voxel_field(&a1, &a2), &voxel_field(&b1, &b2), &voxel_field(&union(&a1, &b1), &union(&a2, &b2)));
            let (c1, c2, d1, d2) = (a1.coarsen(), a2.coarsen(), b1.coarsen(), b2.coarsen());
            let coarse =
                terms(&voxel_field(&c1, &c2), &voxel_field(&d1, &d2), &voxel_field(&union(&c1, &d1), &union(&c2, &d2)));
            let r = |i: usize| Estimate::richardson(fine[i], coarse[i], q.target_rel_err);
            Ok(Interference { e_ab: r(0), e_ba: r(1), e_a: r(2), e_b: r(3), e_total: r(4) })
        }
        _ => Err(Error::invalid("both pairs must use the same kind of distribution")),
    }
}

/// [E_AB, E_BA, E_A, E_B, E_total] at cell size h on one shared grid.
fn shape_terms(pa: &[SignedPart], pb: &[SignedPart], all: &[SignedPart], h: f64, q: &QuadratureSpec) -> [f64; 5] {
    let grid = plan(all, h, 1);
    let class = classify(all);
    let fa = build(&grid, pa, class);
    let fb = build(&grid, pb, class);
    let ft = build(&grid, all, class);
    let e = field_energies(&[(&fa, &fb), (&fb, &fa), (&fa, &fa), (&fb, &fb), (&ft, &ft)], q);
    [e[0], e[1], e[2], e[3], e[4]]
}
