use super::capacitor::{stack_energy, stack_warnings};
use super::{positive, MaterialAt};
use crate::constants::{EPS0, G, TWO_PI};
use crate::error::{Error, Result};
use crate::formulary::Model;

/// Plate capacitor with a piezo ceramic as dielectric.
#[derive(Debug, Clone, PartialEq)]
pub struct PiezoSpec {
    /// Plate area (m²).
    pub area: f64,
    /// Piezo thickness d (m).
    pub thickness: f64,
    /// Plate thickness d_m (m).
    pub plate_thickness: f64,
    pub piezo: MaterialAt,
    pub plates: MaterialAt,
    pub layers: u32,
}

impl PiezoSpec {
    pub fn validate(&self) -> Result<()> {
        positive("piezo area", self.area)?;
        positive("piezo thickness", self.thickness)?;
        positive("piezo plate thickness", self.plate_thickness)?;
        if self.layers == 0 {
            return Err(Error::invalid("piezo needs at least one layer"));
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        stack_warnings("piezo", self.area, self.thickness, self.plate_thickness)
    }

    /// ε₀·ε_r·A/d of one layer (F).
    pub fn capacitance(&self) -> Result<f64> {
        Ok(EPS0 * self.piezo.material.eps_r()? * self.area / self.thickness)
    }

    /// d/(2v∥ of the piezo) + d_m/(v∥ of the plates).
    pub fn settling_time(&self) -> Result<f64> {
        Ok(self.thickness / (2.0 * self.piezo.material.v_par()?) + self.plate_thickness / self.plates.material.v_par()?)
    }
}

/// Plate displacement layers·d33·V/2.
pub fn piezo_displacement(p: &PiezoSpec, v: f64) -> Result<f64> {
    Ok(p.layers as f64 * p.piezo.material.d33()? * v.abs() / 2.0)
}

/// Energy of the extended piezo plus the two displaced plates.
pub fn piezo_dp_energy(p: &PiezoSpec, ds: f64, model: Model) -> Result<f64> {
    let (a, b) = stack_energy(p.area, p.thickness, p.plate_thickness, &p.piezo, &p.plates, ds, model)?;
    Ok(a + b)
}

/// Continuum-only form 2πG·A·(d·ρ_p²/3 + 2·d_m·ρ_m²)·ds².
pub fn piezo_long_distance_energy(p: &PiezoSpec, ds: f64) -> f64 {
    let (rp, rm) = (p.piezo.material.rho, p.plates.material.rho);
    TWO_PI * G * p.area * (p.thickness * rp * rp / 3.0 + 2.0 * p.plate_thickness * rm * rm) * ds * ds
}
