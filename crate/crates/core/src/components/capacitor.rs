use super::{positive, ComponentResult, Effect, MaterialAt};
use crate::constants::{E_CHARGE, EPS0, G, M_E, TWO_PI};
use crate::error::Result;
use crate::formulary::{GeometryCase, Model};

/// Plate capacitor: a dielectric slab of thickness d between two metal
/// plates of thickness d_m, all of area A.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitorSpec {
    /// Plate area (m²).
    pub area: f64,
    /// Dielectric thickness d (m).
    pub thickness: f64,
    /// Plate thickness d_m (m).
    pub plate_thickness: f64,
    pub dielectric: MaterialAt,
    pub plates: MaterialAt,
}

impl CapacitorSpec {
    pub fn validate(&self) -> Result<()> {
        positive("capacitor area", self.area)?;
        positive("capacitor thickness", self.thickness)?;
        positive("capacitor plate thickness", self.plate_thickness)
    }

    pub fn warnings(&self) -> Vec<String> {
        stack_warnings("capacitor", self.area, self.thickness, self.plate_thickness)
    }

    /// ε₀·ε_r·A/d (F).
    pub fn capacitance(&self) -> Result<f64> {
        Ok(EPS0 * self.dielectric.material.eps_r()? * self.area / self.thickness)
    }

    /// d/(2v∥) of the dielectric.
    pub fn settling_time(&self) -> Result<f64> {
        Ok(self.thickness / (2.0 * self.dielectric.material.v_par()?))
    }
}

pub(crate) fn stack_warnings(what: &str, area: f64, d: f64, d_m: f64) -> Vec<String> {
    let side = area.sqrt();
    if side < 10.0 * d.max(d_m) {
        vec![format!("{what}: plate side {side:.3e} m is not much larger than the thicknesses; interference terms may matter")]
    } else {
        Vec::new()
    }
}

/// Energies of a slab extended by 2·ds (surfaces moving by ds) and of two
/// plates displaced by ds: (slab, both plates).
pub(crate) fn stack_energy(
    area: f64,
    d: f64,
    d_m: f64,
    core: &MaterialAt,
    plates: &MaterialAt,
    ds: f64,
    model: Model,
) -> Result<(f64, f64)> {
    let slab = core.energy(GeometryCase::ExtendedPlate, area * d, ds, model)?.total;
    let plate = plates.energy(GeometryCase::DisplacedPlate, area * d_m, ds, model)?.total;
    Ok((slab, 2.0 * plate))
}

/// Plate displacement from compressing the dielectric when the voltage
/// changes by dv around the mean voltage v: ε₀·ε_r²·V·ΔV/(E_e·d).
pub fn capacitor_displacement(c: &CapacitorSpec, v: f64, dv: f64) -> Result<f64> {
    let m = &c.dielectric.material;
    Ok(EPS0 * m.eps_r()?.powi(2) * v * dv.abs() / (m.e_e()? * c.thickness))
}

/// Energy of the compressed dielectric plus the two displaced plates.
pub fn capacitor_dp_energy(c: &CapacitorSpec, ds: f64, model: Model) -> Result<f64> {
    let (a, b) = stack_energy(c.area, c.thickness, c.plate_thickness, &c.dielectric, &c.plates, ds, model)?;
    Ok(a + b)
}

/// Quadratic small-displacement form (A/12)·(d·T̄_d/(3σ_d²) + 2·d_m·T̄_m/σ_m²)·ds².
pub fn capacitor_small_displacement_energy(c: &CapacitorSpec, ds: f64) -> f64 {
    let d = &c.dielectric.derived;
    let m = &c.plates.derived;
    c.area / 12.0
        * (c.thickness * d.t_g_s / (3.0 * d.sigma * d.sigma) + 2.0 * c.plate_thickness * m.t_g_s / (m.sigma * m.sigma))
        * ds
        * ds
}

/// Ion displacement from polarising the dielectric: ε₀(ε_r − 1)·m̄·ΔV/(e·ρ·d).
pub fn polarisation_displacement(c: &CapacitorSpec, dv: f64) -> Result<f64> {
    let m = &c.dielectric.material;
    Ok(EPS0 * (m.eps_r()? - 1.0) * m.mean_mass()? * dv.abs() / (E_CHARGE * m.rho * c.thickness))
}

/// Energy from the electron mass of the plate charge:
/// 2πG·ε₀²·m_e²·ε_r²·A·ΔV²/(e²·d).
pub fn charge_mass_dp_energy(c: &CapacitorSpec, dv: f64) -> Result<f64> {
    let eps_r = c.dielectric.material.eps_r()?;
    Ok(TWO_PI * G * EPS0 * EPS0 * M_E * M_E * eps_r * eps_r * c.area * dv * dv / (E_CHARGE * E_CHARGE * c.thickness))
}

/// Capacitor held in a superposition of voltages v − dv/2 and v + dv/2.
/// The polarisation is treated as a displaced slab of dielectric; the
/// charge-mass term has no short-distance part and is kept in both models.
pub fn evaluate_capacitor(c: &CapacitorSpec, v: f64, dv: f64, model: Model) -> Result<ComponentResult> {
    c.validate()?;
    let ds = capacitor_displacement(c, v, dv)?;
    let (slab, plates) = stack_energy(c.area, c.thickness, c.plate_thickness, &c.dielectric, &c.plates, ds, model)?;
    let dp = polarisation_displacement(c, dv)?;
    let pol = c.dielectric.energy(GeometryCase::DisplacedPlate, c.area * c.thickness, dp, model)?.total;
    let detail = vec![
        Effect { label: "dielectric compression".into(), displacement: ds, energy: slab },
        Effect { label: "plate displacement".into(), displacement: ds, energy: plates },
        Effect { label: "polarisation".into(), displacement: dp, energy: pol },
        Effect { label: "charge mass".into(), displacement: 0.0, energy: charge_mass_dp_energy(c, dv)? },
    ];
    let settling = c.settling_time().ok();
    ComponentResult::assemble("capacitor", detail, settling, ds / c.dielectric.derived.sigma, c.warnings())
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::at;
    use super::*;
    use crate::formulary::lifetime;
    use approx::assert_relative_eq;

    fn reference() -> CapacitorSpec {
        CapacitorSpec {
            area: 49e-4,
            thickness: 1e-3,
            plate_thickness: 0.03e-3,
            dielectric: at("Al2O3"),
            plates: at("Cu"),
        }
    }

    #[test]
    fn compression_displacement() {
        let c = reference();
        assert_eq!(capacitor_displacement(&c, 427.5, 0.0).unwrap(), 0.0);
        let ds = capacitor_displacement(&c, 427.5, 15.0).unwrap();
        let ratio = c.dielectric.derived.sigma / ds;
        assert!((ratio - 360.0).abs() < 0.03 * 360.0, "σ/Δs = {ratio}");
        let mut stiff = c.clone();
        stiff.dielectric.material.e_e = Some(2.0 * c.dielectric.material.e_e.unwrap());
        assert_relative_eq!(capacitor_displacement(&stiff, 427.5, 15.0).unwrap(), ds / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn lifetime_near_seventy_ms() {
        let r = evaluate_capacitor(&reference(), 427.5, 15.0, Model::PenroseFull).unwrap();
        assert!((r.lifetime - 0.070).abs() < 0.35 * 0.070, "T = {}", r.lifetime);
        assert!(!r.settling_warning);
        assert_relative_eq!(r.settling.unwrap(), 0.05e-6, max_relative = 1e-9);
        assert_relative_eq!(r.lifetime * r.energy, crate::constants::HBAR, max_relative = 1e-12);
    }

    #[test]
    fn quadratic_form_matches_full_sum() {
        let c = reference();
        let ds = c.dielectric.derived.sigma / 100.0;
        let full = capacitor_dp_energy(&c, ds, Model::PenroseFull).unwrap();
        assert_relative_eq!(capacitor_small_displacement_energy(&c, ds), full, max_relative = 0.02);
    }

    #[test]
    fn minor_effects_are_negligible() {
        let c = reference();
        let ds = capacitor_displacement(&c, 427.5, 15.0).unwrap();
        let dp = polarisation_displacement(&c, 15.0).unwrap();
        let ratio = ds / dp;
        assert!(ratio > 100.0 && ratio < 400.0, "compression/polarisation = {ratio}");
        let t = lifetime(charge_mass_dp_energy(&c, 15.0).unwrap()).unwrap();
        assert!(t > 1e14 && t < 1e16, "charge-mass lifetime {t}");
        let r = evaluate_capacitor(&c, 427.5, 15.0, Model::PenroseFull).unwrap();
        let main = r.detail[0].energy + r.detail[1].energy;
        assert!((r.energy / main - 1.0).abs() < 0.01);
    }

    #[test]
    fn trivial_limits() {
        let c = reference();
        assert_eq!(capacitor_dp_energy(&c, 0.0, Model::PenroseFull).unwrap(), 0.0);
        assert_eq!(polarisation_displacement(&c, 0.0).unwrap(), 0.0);
        assert_eq!(charge_mass_dp_energy(&c, 0.0).unwrap(), 0.0);
        let mut vacuum = c.clone();
        vacuum.dielectric.material.eps_r = Some(1.0);
        assert_eq!(polarisation_displacement(&vacuum, 15.0).unwrap(), 0.0);
        let e1 = charge_mass_dp_energy(&c, 15.0).unwrap();
        assert_relative_eq!(charge_mass_dp_energy(&c, 30.0).unwrap(), 4.0 * e1, max_relative = 1e-12);
    }

    #[test]
    fn narrow_plates_warn() {
        let mut c = reference();
        c.area = 1e-6;
        assert_eq!(c.warnings().len(), 1);
        assert!(reference().warnings().is_empty());
    }
}
