//! Named comparisons between the closed forms and the oracle.

use super::{
    dp_energy, dp_energy_field_form, f_sigma_by_shells, interference_terms, separation_work, GaussianSite,
    MassDistribution, QuadratureSpec, Shape, SuperposedPair, UniformShape,
};
use crate::constants::{G, SQRT_PI};
use crate::error::{Error, Result};
use crate::formulary::{f_sigma, long_distance_energy, nucleus_dp_energy, GeometryCase};

/// Thickness (plates) or diameter (rods, spheres) of the test bodies (m).
const FEATURE: f64 = 1e-3;
const DENSITY: f64 = 2330.0;
/// Lateral size over thickness of the test plates.
const PLATE_ASPECT: f64 = 320.0;
/// Length over diameter of the test rod.
const ROD_ASPECT: f64 = 400.0;

pub const CHECK_NAMES: &[&str] = &[
    "f-sigma",
    "point-limit",
    "displaced-plate",
    "extended-plate",
    "extended-rod",
    "extended-sphere",
    "separation-work",
    "capacitor-interference",
    "field-form",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub label: String,
    pub reference: f64,
    pub value: f64,
    /// Quadrature error estimate of `value`.
    pub error: f64,
    /// Allowed relative deviation, or the upper bound for ratio rows.
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    fn relative(label: impl Into<String>, reference: f64, value: f64, error: f64, tolerance: f64) -> Self {
        let pass = (value / reference - 1.0).abs() <= tolerance;
        CheckRow { label: label.into(), reference, value, error, tolerance, pass }
    }

    pub fn deviation(&self) -> f64 {
        if self.reference == 0.0 {
            self.value.abs()
        } else {
            (self.value / self.reference - 1.0).abs()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub rows: Vec<CheckRow>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn run(name: &str, q: &QuadratureSpec) -> Result<CheckReport> {
    q.validate()?;
    let rows_only = |rows: Vec<CheckRow>| CheckReport { name: name.to_string(), rows, notes: Vec::new() };
    match name {
        "f-sigma" => Ok(rows_only(f_sigma_rows()?)),
        "point-limit" => Ok(rows_only(vec![point_limit_row()?])),
        "displaced-plate" => Ok(rows_only(vec![geometry_row(GeometryCase::DisplacedPlate, q)?])),
        "extended-plate" => Ok(rows_only(vec![geometry_row(GeometryCase::ExtendedPlate, q)?])),
        "extended-rod" => Ok(rows_only(vec![geometry_row(GeometryCase::ExtendedRod, q)?])),
        "extended-sphere" => Ok(rows_only(vec![geometry_row(GeometryCase::ExtendedSphere, q)?])),
        "separation-work" => Ok(rows_only(separation_rows(q)?)),
        "capacitor-interference" => capacitor_report(&[12.5, 25.0, 50.0], q),
        "field-form" => Ok(rows_only(field_form_rows(q)?)),
        _ => Err(Error::invalid(format!("unknown check '{name}'; known: {}", CHECK_NAMES.join(", ")))),
    }
}

/// The erf form against its two asymptotic branches and the shell
/// quadrature.
pub fn f_sigma_rows() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for x in [0.001, 0.01, 0.05, 0.1] {
        rows.push(CheckRow::relative(format!("x = {x}: x²/12"), x * x / 12.0, f_sigma(x)?, 0.0, 0.01));
    }
    for x in [4.0, 6.0, 10.0, 30.0] {
        rows.push(CheckRow::relative(format!("x = {x}: 1 − √π/x"), 1.0 - SQRT_PI / x, f_sigma(x)?, 0.0, 0.01));
    }
    for x in [0.5, 1.0, 2.0, 3.0] {
        rows.push(CheckRow::relative(format!("x = {x}: shell quadrature"), f_sigma_by_shells(x)?, f_sigma(x)?, 0.0, 0.002));
    }
    Ok(rows)
}

/// E(∞) − E(r) = G m²/r for a point-like nucleus displaced by r ≫ σ.
pub fn point_limit_row() -> Result<CheckRow> {
    let (m, sigma) = (1e-25, 1e-11);
    let r = 50.0 * sigma;
    let nucleus = |ds: f64| -> Result<f64> {
        let a = MassDistribution::GaussianCloud(vec![GaussianSite { center: [0.0; 3], mass: m, sigma }]);
        Ok(dp_energy(&SuperposedPair::displaced(&a, [ds, 0.0, 0.0])?, &QuadratureSpec::default())?.value)
    };
    let far = nucleus(1e6 * sigma)?;
    let value = far - nucleus(r)?;
    Ok(CheckRow::relative("r = 50σ", G * m * m / r, value, 0.0, 0.01))
}

/// The pair of a solid of the given case, thickness or diameter `FEATURE`,
/// displaced or extended by `ds`, and the state-1 volume.
pub fn geometry_pair(case: GeometryCase, ds: f64) -> Result<(SuperposedPair, f64)> {
    let d = FEATURE;
    let rho = DENSITY;
    let uni = |shape, rho| MassDistribution::UniformShape(UniformShape { shape, rho });
    let (s1, s2) = match case {
        GeometryCase::DisplacedPlate => {
            let size = [PLATE_ASPECT * d, PLATE_ASPECT * d, d];
            (uni(Shape::Box { center: [0.0; 3], size }, rho), uni(Shape::Box { center: [0.0, 0.0, ds], size }, rho))
        }
        GeometryCase::ExtendedPlate => {
            let l = PLATE_ASPECT * d;
            (
                uni(Shape::Box { center: [0.0; 3], size: [l, l, d] }, rho),
                uni(Shape::Box { center: [0.0; 3], size: [l, l, d + 2.0 * ds] }, rho * d / (d + 2.0 * ds)),
            )
        }
        GeometryCase::ExtendedRod => {
            let (r, length) = (d / 2.0, ROD_ASPECT * d);
            (
                uni(Shape::Cylinder { center: [0.0; 3], radius: r, length }, rho),
                uni(Shape::Cylinder { center: [0.0; 3], radius: r + ds, length }, rho * (r / (r + ds)).powi(2)),
            )
        }
        GeometryCase::ExtendedSphere => {
            let r = d / 2.0;
            (
                uni(Shape::Sphere { center: [0.0; 3], radius: r }, rho),
                uni(Shape::Sphere { center: [0.0; 3], radius: r + ds }, rho * (r / (r + ds)).powi(3)),
            )
        }
    };
    let volume = s1.total_mass() / rho;
    Ok((SuperposedPair::new(s1, s2)?, volume))
}

/// Base displacement in fine cells and the number of multiples of it used
/// to extrapolate E/Δs² to Δs → 0. Plates move by whole coarse cells and
/// need a quadratic fit; curved bodies move by one fine cell.
fn displacement_plan(case: GeometryCase) -> (f64, usize) {
    match case {
        GeometryCase::DisplacedPlate | GeometryCase::ExtendedPlate => (2.0, 3),
        GeometryCase::ExtendedRod | GeometryCase::ExtendedSphere => (1.0, 2),
    }
}

/// Oracle coefficient E/Δs² at Δs, 2Δs, … extrapolated polynomially to
/// Δs → 0, with its error estimate.
pub fn small_displacement_coefficient(case: GeometryCase, q: &QuadratureSpec) -> Result<(f64, f64)> {
    let h = FEATURE / q.resolution as f64;
    let (cells, n) = displacement_plan(case);
    let ds = cells * h;
    // Lagrange weights at zero for nodes 1..=n.
    let weights: Vec<f64> = (1..=n)
        .map(|k| (1..=n).filter(|&j| j != k).map(|j| j as f64 / (j as f64 - k as f64)).product())
        .collect();
    let (mut coef, mut err) = (0.0, 0.0);
    for (k, w) in weights.iter().enumerate() {
        let s = (k + 1) as f64 * ds;
        let e = dp_energy(&geometry_pair(case, s)?.0, q)?;
        coef += w * e.value / (s * s);
        err += w.abs() * e.error / (s * s);
    }
    Ok((coef, err))
}

/// Voxelised body against the continuum energy 2π·α·G·V·ρ²·Δs².
pub fn geometry_row(case: GeometryCase, q: &QuadratureSpec) -> Result<CheckRow> {
    let (coef, err) = small_displacement_coefficient(case, q)?;
    let (_, volume) = geometry_pair(case, 0.0)?;
    let reference = long_distance_energy(case, 1.0, DENSITY, volume);
    Ok(CheckRow::relative(format!("{}: E/Δs² (J/m²)", case.label()), reference, coef, err, 0.02))
}

/// Work against the attraction versus the energy of the displaced pair.
pub fn separation_rows(q: &QuadratureSpec) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let (m, sigma) = (28.0 * crate::constants::AMU, 7.2e-12);
    let nucleus = MassDistribution::GaussianCloud(vec![GaussianSite { center: [0.0; 3], mass: m, sigma }]);
    let ds = [0.0, 0.0, sigma];
    let w = separation_work(&nucleus, ds, q)?;
    let e = dp_energy(&SuperposedPair::displaced(&nucleus, ds)?, q)?;
    rows.push(CheckRow::relative("nucleus, Δs = σ", e.value, w.value, w.error + e.error, 0.01));
    rows.push(CheckRow::relative("nucleus, closed form", nucleus_dp_energy(m, sigma, sigma)?, e.value, e.error, 1e-9));

    let r = FEATURE / 2.0;
    let sphere = MassDistribution::uniform(Shape::Sphere { center: [0.0; 3], radius: r }, DENSITY);
    let ds = [0.0, 0.0, 0.1 * r];
    // The work needs every cell pair; cap its grid so the check stays quick.
    let qw = QuadratureSpec { resolution: q.resolution.min(32), ..*q };
    let w = separation_work(&sphere, ds, &qw)?;
    let e = dp_energy(&SuperposedPair::displaced(&sphere, ds)?, q)?;
    rows.push(CheckRow::relative("sphere, Δs = 0.1·R", e.value, w.value, w.error + e.error, 0.01));
    Ok(rows)
}

/// Interference of the compressed dielectric (A) and the inward-moving
/// plates (B) of a plate capacitor with side/thickness ratio `aspect`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitorInterference {
    pub aspect: f64,
    /// |E_AB + E_BA| / (E_A + E_B), extrapolated to Δs → 0.
    pub ratio: f64,
    /// |E_AB − E_BA| / |E_AB|.
    pub asymmetry: f64,
    /// |E_total − (E_A + E_B + E_AB + E_BA)| / E_total.
    pub additivity: f64,
}

pub fn capacitor_pairs(aspect: f64, ds: f64) -> Result<(SuperposedPair, SuperposedPair)> {
    let d = FEATURE;
    let dm = d / 4.0;
    let l = aspect * d;
    let (rho_d, rho_m) = (3940.0, 10500.0);
    let dielectric = SuperposedPair::new(
        MassDistribution::uniform(Shape::Box { center: [0.0; 3], size: [l, l, d] }, rho_d),
        MassDistribution::uniform(Shape::Box { center: [0.0; 3], size: [l, l, d - 2.0 * ds] }, rho_d * d / (d - 2.0 * ds)),
    )?;
    let plates = |shift: f64| {
        let z = 0.5 * (d + dm) - shift;
        MassDistribution::Composite(vec![
            UniformShape { shape: Shape::Box { center: [0.0, 0.0, z], size: [l, l, dm] }, rho: rho_m },
            UniformShape { shape: Shape::Box { center: [0.0, 0.0, -z], size: [l, l, dm] }, rho: rho_m },
        ])
    };
    Ok((dielectric, SuperposedPair::new(plates(0.0), plates(ds))?))
}

pub fn capacitor_interference(aspect: f64, q: &QuadratureSpec) -> Result<CapacitorInterference> {
    let h = FEATURE / 4.0 / q.resolution as f64;
    let ds = 2.0 * h;
    let (a1, b1) = capacitor_pairs(aspect, ds)?;
    let (a2, b2) = capacitor_pairs(aspect, 2.0 * ds)?;
    let i1 = interference_terms(&a1, &b1, q)?;
    let i2 = interference_terms(&a2, &b2, q)?;
    // Each term is E/Δs² extrapolated linearly to Δs → 0.
    let ex = |x1: f64, x2: f64| 2.0 * x1 / (ds * ds) - x2 / (4.0 * ds * ds);
    let cross = ex(i1.e_ab.value + i1.e_ba.value, i2.e_ab.value + i2.e_ba.value);
    let own = ex(i1.e_a.value + i1.e_b.value, i2.e_a.value + i2.e_b.value);
    let sum = i1.e_a.value + i1.e_b.value + i1.e_ab.value + i1.e_ba.value;
    Ok(CapacitorInterference {
        aspect,
        ratio: cross.abs() / own,
        asymmetry: (i1.e_ab.value - i1.e_ba.value).abs() / i1.e_ab.value.abs().max(f64::MIN_POSITIVE),
        additivity: (i1.e_total.value - sum).abs() / i1.e_total.value,
    })
}

/// Least-squares slope of ln(ratio) against ln(aspect).
pub fn decay_exponent(rows: &[CapacitorInterference]) -> f64 {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.aspect.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn capacitor_report(aspects: &[f64], q: &QuadratureSpec) -> Result<CheckReport> {
    let rows: Vec<CapacitorInterference> = aspects.iter().map(|a| capacitor_interference(*a, q)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let decaying = i == 0 || r.ratio < rows[i - 1].ratio;
        let bound = if r.aspect >= 50.0 { 0.02 } else { f64::INFINITY };
        out.push(CheckRow {
            label: format!("√A/d = {}: |E_AB + E_BA|/(E_A + E_B)", r.aspect),
            reference: 0.0,
            value: r.ratio,
            error: 0.0,
            tolerance: bound,
            pass: decaying && r.ratio < bound,
        });
        out.push(CheckRow {
            label: format!("√A/d = {}: |E_AB − E_BA|/|E_AB|", r.aspect),
            reference: 0.0,
            value: r.asymmetry,
            error: 0.0,
            tolerance: 1e-6,
            pass: r.asymmetry < 1e-6,
        });
    }
    let notes = vec![format!("interference decays as (√A/d)^{:.2}", decay_exponent(&rows))];
    Ok(CheckReport { name: "capacitor-interference".into(), rows: out, notes })
}

/// Field-integral form against the pair sum for a small displaced plate.
pub fn field_form_rows(q: &QuadratureSpec) -> Result<Vec<CheckRow>> {
    let res = q.resolution.min(8);
    let qf = QuadratureSpec { resolution: res, ..*q };
    let d = FEATURE;
    let l = 4.0 * d;
    let ds = 2.0 * d / res as f64;
    let size = [l, l, d];
    let pair = SuperposedPair::new(
        MassDistribution::uniform(Shape::Box { center: [0.0; 3], size }, DENSITY),
        MassDistribution::uniform(Shape::Box { center: [0.0, 0.0, ds], size }, DENSITY),
    )?;
    let field = dp_energy_field_form(&pair, &qf)?;
    let sum = dp_energy(&pair, &qf)?;
    Ok(vec![
        CheckRow::relative("field form vs pair sum", sum.value, field.value, field.error + sum.error, 0.03),
    ])
}
