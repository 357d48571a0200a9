use super::{positive, ComponentResult, Effect, MaterialAt};
use crate::constants::K_B;
use crate::error::Result;
use crate::formulary::{EnergyBreakdown, GeometryCase, Model};
use std::f64::consts::PI;

/// The p-n junction of a photodiode as a disc heated through the diode's
/// internal resistance.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotodiodeSpec {
    /// Disc thickness (m).
    pub thickness: f64,
    /// Disc radius (m).
    pub radius: f64,
    pub material: MaterialAt,
    /// Internal resistance R_d (Ω).
    pub resistance: f64,
}

impl PhotodiodeSpec {
    pub fn validate(&self) -> Result<()> {
        positive("photodiode thickness", self.thickness)?;
        positive("photodiode radius", self.radius)?;
        positive("photodiode resistance", self.resistance)
    }

    pub fn volume(&self) -> f64 {
        PI * self.radius * self.radius * self.thickness
    }

    /// r/v∥: the rim moves with the expansion of the whole radius.
    pub fn settling_time(&self) -> Result<f64> {
        Ok(self.radius / self.material.material.v_par()?)
    }
}

/// R_d·∫I²dt shared over N = V/ḡ³ atoms at 3k_B each.
pub fn photodiode_temperature_rise(p: &PhotodiodeSpec, i2t: f64) -> f64 {
    let atoms = p.volume() / p.material.derived.g_bar.powi(3);
    p.resistance * i2t / (3.0 * K_B * atoms)
}

/// Energy of the disc as an extended rod whose radius grows by dr.
pub fn photodiode_dp_energy(p: &PhotodiodeSpec, dr: f64, model: Model) -> Result<EnergyBreakdown> {
    p.material.energy(GeometryCase::ExtendedRod, p.volume(), dr, model)
}

pub fn evaluate_photodiode(p: &PhotodiodeSpec, i2t: f64, model: Model) -> Result<ComponentResult> {
    p.validate()?;
    let dt = photodiode_temperature_rise(p, i2t);
    let dr = p.material.material.alpha_l()? * p.radius * dt;
    let e = photodiode_dp_energy(p, dr, model)?;
    let detail = vec![Effect { label: "radial expansion".into(), displacement: dr, energy: e.total }];
    let mut r = ComponentResult::assemble("photodiode", detail, p.settling_time().ok(), dr / p.material.derived.sigma, Vec::new())?;
    r.temperature_rise = Some(dt);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::at;
    use super::*;
    use approx::assert_relative_eq;

    fn spad() -> PhotodiodeSpec {
        PhotodiodeSpec { thickness: 70e-6, radius: 250e-6, material: at("Si"), resistance: 500.0 }
    }

    #[test]
    fn spad_heating_and_lifetime() {
        let p = spad();
        let i2t = 18e-12;
        let dt = photodiode_temperature_rise(&p, i2t);
        assert!(dt > 1e-4 && dt < 4e-4, "ΔT = {dt}");
        let r = evaluate_photodiode(&p, i2t, Model::PenroseFull).unwrap();
        let inv = 1.0 / r.displacement_ratio;
        assert!(inv > 35.0 && inv < 70.0, "σ/Δr = {inv}");
        assert!((r.lifetime - 1000.0).abs() < 0.25 * 1000.0, "T = {}", r.lifetime);
        assert_eq!(evaluate_photodiode(&p, 0.0, Model::PenroseFull).unwrap().energy, 0.0);
    }

    #[test]
    fn halving_radius_at_fixed_temperature() {
        let p = spad();
        let mut q = p.clone();
        q.radius /= 2.0;
        let alpha = p.material.material.alpha_l.unwrap();
        let dt = 1e-4;
        let e1 = photodiode_dp_energy(&p, alpha * p.radius * dt, Model::PenroseFull).unwrap().total;
        let e2 = photodiode_dp_energy(&q, alpha * q.radius * dt, Model::PenroseFull).unwrap().total;
        assert_relative_eq!(e2 / e1, 1.0 / 16.0, max_relative = 1e-9);
    }
}
