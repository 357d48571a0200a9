use super::{positive, ComponentResult, Effect, MaterialAt};
use crate::constants::K_B;
use crate::error::{Error, Result};
use crate::formulary::{long_distance_energy, short_distance_energy, GeometryCase, Model, SuperposedSolid};
use std::f64::consts::PI;

/// Wire or rod resistor heated by a current pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct ConductorSpec {
    /// Length l (m).
    pub length: f64,
    /// Effective length l_e ≤ l over which the longitudinal expansion acts (m).
    pub effective_length: f64,
    /// Radius r (m).
    pub radius: f64,
    pub material: MaterialAt,
}

impl ConductorSpec {
    pub fn validate(&self) -> Result<()> {
        positive("conductor length", self.length)?;
        positive("conductor effective length", self.effective_length)?;
        positive("conductor radius", self.radius)?;
        if self.effective_length > self.length * (1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "effective length {} m exceeds length {} m",
                self.effective_length, self.length
            )));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        PI * self.radius * self.radius * self.length
    }

    /// ρ_Ω·l/(πr²) (Ω).
    pub fn resistance(&self) -> Result<f64> {
        Ok(self.material.material.rho_ohm()? * self.length / (PI * self.radius * self.radius))
    }

    /// l_e/(2v∥).
    pub fn settling_time(&self) -> Result<f64> {
        Ok(self.effective_length / (2.0 * self.material.material.v_par()?))
    }
}

/// Adiabatic temperature rise ḡ³·R²·∫I²dt/(3k_B·ρ_Ω·l²), with 3k_B per atom.
pub fn joule_temperature_rise(c: &ConductorSpec, i2t: f64) -> Result<f64> {
    let r = c.resistance()?;
    let g = c.material.derived.g_bar;
    Ok(g.powi(3) * r * r * i2t / (3.0 * K_B * c.material.material.rho_ohm()? * c.length * c.length))
}

/// (ds∥, ds⊥) = (α_L·l_e/2·ΔT, α_L·r·ΔT).
pub fn thermal_displacements(c: &ConductorSpec, dt: f64) -> Result<(f64, f64)> {
    let a = c.material.material.alpha_l()?;
    Ok((a * c.effective_length / 2.0 * dt, a * c.radius * dt))
}

/// Short-distance term of an extended plate at ds∥ plus the continuum
/// term of an extended rod at ds⊥.
pub fn conductor_dp_energy(c: &ConductorSpec, ds_par: f64, ds_perp: f64, model: Model) -> Result<(f64, f64)> {
    let v = c.volume();
    let solid = SuperposedSolid::new(GeometryCase::ExtendedPlate, c.material.derived.clone(), v, ds_par, model)?;
    let short = match model {
        Model::PenroseFull => short_distance_energy(&solid),
        Model::DiosiSmeared => 0.0,
    };
    let long = long_distance_energy(GeometryCase::ExtendedRod, ds_perp, c.material.derived.rho, v);
    Ok((short, long))
}

pub fn evaluate_conductor(name: &str, c: &ConductorSpec, i2t: f64, model: Model) -> Result<ComponentResult> {
    c.validate()?;
    let dt = joule_temperature_rise(c, i2t)?;
    let (par, perp) = thermal_displacements(c, dt)?;
    let (short, long) = conductor_dp_energy(c, par, perp, model)?;
    let detail = vec![
        Effect { label: "longitudinal expansion".into(), displacement: par, energy: short },
        Effect { label: "transverse expansion".into(), displacement: perp, energy: long },
    ];
    let mut r = ComponentResult::assemble(name, detail, c.settling_time().ok(), par / c.material.derived.sigma, Vec::new())?;
    r.temperature_rise = Some(dt);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{at, with};
    use super::*;
    use approx::assert_relative_eq;

    const I2T: f64 = 18e-6 * 1e-6;

    fn resistor() -> ConductorSpec {
        let si = with("Si", |m| m.rho_ohm = Some(0.05));
        ConductorSpec { length: 0.13, effective_length: 0.13, radius: 1e-3, material: si }
    }

    fn wire() -> ConductorSpec {
        ConductorSpec { length: 2.0, effective_length: 0.04, radius: 0.5e-3, material: at("Cu") }
    }

    #[test]
    fn resistor_heating_and_lifetime() {
        let c = resistor();
        let dt = joule_temperature_rise(&c, I2T).unwrap();
        assert!(dt > 2e-8 && dt < 4e-8, "ΔT = {dt}");
        let (par, _) = thermal_displacements(&c, dt).unwrap();
        let inv = c.material.derived.sigma / par;
        assert!((inv - 1400.0).abs() < 0.15 * 1400.0, "σ/Δs = {inv}");
        let r = evaluate_conductor("resistor", &c, I2T, Model::PenroseFull).unwrap();
        assert!((r.lifetime - 45.0).abs() < 0.25 * 45.0, "T = {}", r.lifetime);
    }

    #[test]
    fn wire_heating_and_lifetime() {
        let c = wire();
        assert!((c.resistance().unwrap() - 0.04).abs() < 0.01);
        let dt = joule_temperature_rise(&c, I2T).unwrap();
        assert!(dt > 0.5e-13 && dt < 2e-13, "ΔT = {dt}");
        let (par, _) = thermal_displacements(&c, dt).unwrap();
        let ratio = par / c.material.derived.sigma;
        assert!(ratio > 2.5e-9 && ratio < 1e-8, "Δs/σ = {ratio}");
        let r = evaluate_conductor("wire", &c, I2T, Model::PenroseFull).unwrap();
        assert!(r.lifetime > 2e10 / 3.0 && r.lifetime < 2e10 * 3.0, "T = {}", r.lifetime);
    }

    #[test]
    fn quadratic_form_for_small_displacement() {
        let c = resistor();
        let dt = joule_temperature_rise(&c, I2T).unwrap();
        let (par, perp) = thermal_displacements(&c, dt).unwrap();
        let (short, long) = conductor_dp_energy(&c, par, perp, Model::PenroseFull).unwrap();
        let m = &c.material.derived;
        let closed = m.t_g_s * c.volume() / 36.0 * (par / m.sigma).powi(2);
        assert_relative_eq!(short, closed, max_relative = 1e-12);
        assert!(long < 1e-3 * short);
    }

    #[test]
    fn resistivity_scaling_at_fixed_resistance() {
        let base = resistor();
        let target = base.resistance().unwrap();
        let energy = |rho_ohm: f64| {
            let mut c = base.clone();
            c.material.material.rho_ohm = Some(rho_ohm);
            c.radius = (rho_ohm * c.length / (PI * target)).sqrt();
            evaluate_conductor("r", &c, I2T, Model::PenroseFull).unwrap().energy
        };
        let (lo, hi) = (0.005, 0.5);
        let slope = (energy(hi) / energy(lo)).ln() / (hi / lo).ln();
        assert!((slope + 1.0).abs() < 0.01, "slope {slope}");
    }

    #[test]
    fn effective_length_bounded_by_length() {
        let mut c = wire();
        c.effective_length = 3.0;
        assert!(c.validate().is_err());
        assert_eq!(thermal_displacements(&wire(), 0.0).unwrap(), (0.0, 0.0));
    }
}
