//! Diósi-Penrose models of detector components: plate capacitors, wires and
//! resistors, photodiode discs and piezo capacitors.

mod capacitor;
mod conductor;
mod photodiode;
mod piezo;

pub use capacitor::{
    capacitor_displacement, capacitor_dp_energy, capacitor_small_displacement_energy, charge_mass_dp_energy,
    evaluate_capacitor, polarisation_displacement, CapacitorSpec,
};
pub use conductor::{conductor_dp_energy, evaluate_conductor, joule_temperature_rise, thermal_displacements, ConductorSpec};
pub use photodiode::{evaluate_photodiode, photodiode_dp_energy, photodiode_temperature_rise, PhotodiodeSpec};
pub use piezo::{piezo_displacement, piezo_dp_energy, piezo_long_distance_energy, PiezoSpec};

use crate::error::{Error, Result};
use crate::formulary::{lifetime, total_energy, EnergyBreakdown, GeometryCase, Model, SuperposedSolid};
use crate::materials::{derive, DerivedMaterial, Material};

/// A catalog material together with its derived quantities at one
/// temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialAt {
    pub material: Material,
    pub derived: DerivedMaterial,
}

impl MaterialAt {
    pub fn new(material: &Material, temperature: f64) -> Result<Self> {
        Ok(MaterialAt { material: material.clone(), derived: derive(material, temperature)? })
    }

    pub fn name(&self) -> &str {
        &self.material.name
    }

    fn solid(&self, geometry: GeometryCase, volume: f64, ds: f64, model: Model) -> Result<SuperposedSolid> {
        SuperposedSolid::new(geometry, self.derived.clone(), volume, ds, model)
    }

    /// Combined short- and long-distance energy of a body of this material.
    pub fn energy(&self, geometry: GeometryCase, volume: f64, ds: f64, model: Model) -> Result<EnergyBreakdown> {
        Ok(total_energy(&self.solid(geometry, volume, ds, model)?))
    }
}

/// One contribution to a component's energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    pub label: String,
    /// Displacement driving the effect (m); zero where none applies.
    pub displacement: f64,
    /// Energy (J).
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentResult {
    pub name: String,
    /// Energy (J).
    pub energy: f64,
    /// ħ/E (s); infinite for zero energy.
    pub lifetime: f64,
    /// Settling time (s), if the material data allow one.
    pub settling: Option<f64>,
    /// Leading displacement over the nuclei's spatial variation.
    pub displacement_ratio: f64,
    /// Adiabatic temperature rise (K) of heated components.
    pub temperature_rise: Option<f64>,
    pub detail: Vec<Effect>,
    /// Set when the settling time is not much shorter than the lifetime.
    pub settling_warning: bool,
    pub warnings: Vec<String>,
}

/// Settling times count as "much shorter" than the lifetime below this
/// fraction of it.
pub const SETTLING_FRACTION: f64 = 0.1;

impl ComponentResult {
    pub(crate) fn assemble(
        name: &str,
        detail: Vec<Effect>,
        settling: Option<f64>,
        displacement_ratio: f64,
        mut warnings: Vec<String>,
    ) -> Result<Self> {
        let energy: f64 = detail.iter().map(|e| e.energy).sum();
        let lifetime = lifetime(energy)?;
        let settling_warning = match settling {
            Some(t) => t >= SETTLING_FRACTION * lifetime,
            None => false,
        };
        if settling_warning {
            warnings.push(format!(
                "settling time {:.3e} s is not much shorter than the lifetime {:.3e} s",
                settling.unwrap_or(0.0),
                lifetime
            ));
        }
        if settling.is_none() {
            warnings.push("no settling time: longitudinal sound velocity unknown".to_string());
        }
        Ok(ComponentResult {
            name: name.to_string(),
            energy,
            lifetime,
            settling,
            displacement_ratio,
            temperature_rise: None,
            detail,
            settling_warning,
            warnings,
        })
    }
}

/// Any component, for operations shared by all kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum ComponentSpec {
    Capacitor(CapacitorSpec),
    Conductor(ConductorSpec),
    Photodiode(PhotodiodeSpec),
    Piezo(PiezoSpec),
}

/// Time the component's surfaces need to follow a change, from the sound
/// velocities.
pub fn settling_time(spec: &ComponentSpec) -> Result<f64> {
    match spec {
        ComponentSpec::Capacitor(c) => c.settling_time(),
        ComponentSpec::Conductor(c) => c.settling_time(),
        ComponentSpec::Photodiode(p) => p.settling_time(),
        ComponentSpec::Piezo(p) => p.settling_time(),
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}
