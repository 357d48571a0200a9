use super::geometry::{geometric_factor, profile_average_unchecked, GeometryCase};
use crate::constants::{G, HBAR, TWO_PI};
use crate::error::{Error, Result};
use crate::materials::DerivedMaterial;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which collapse model the energy follows. The smeared variant drops the
/// short-distance (nucleus) contribution and keeps only the continuum term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    #[default]
    PenroseFull,
    DiosiSmeared,
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "penrose" | "penrose-full" => Ok(Model::PenroseFull),
            "diosi" | "diosi-smeared" => Ok(Model::DiosiSmeared),
            _ => Err(Error::invalid(format!("unknown model '{s}' (expected penrose or diosi)"))),
        }
    }
}

/// Quadratic branch used for x = ds/σ at or below this value.
pub const QUADRATIC_UP_TO: f64 = 0.1;
/// Band-edge factor for "much smaller" / "much larger".
pub const BAND_FACTOR: f64 = 10.0;
/// Lower edge of the saturated middle band, in units of σ.
pub const MIDDLE_BAND_FROM: f64 = 5.0;
/// Continuum results assume ds below this fraction of V^(1/3).
pub const CONTINUUM_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct SuperposedSolid {
    pub geometry: GeometryCase,
    pub material: DerivedMaterial,
    /// Volume (m³).
    pub volume: f64,
    /// Surface displacement (m).
    pub displacement: f64,
    pub model: Model,
}

impl SuperposedSolid {
    pub fn new(geometry: GeometryCase, material: DerivedMaterial, volume: f64, displacement: f64, model: Model) -> Result<Self> {
        let s = SuperposedSolid { geometry, material, volume, displacement, model };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.volume > 0.0 && self.volume.is_finite()) {
            return Err(Error::invalid(format!("volume must be positive, got {}", self.volume)));
        }
        if !(self.displacement >= 0.0 && self.displacement.is_finite()) {
            return Err(Error::invalid(format!("displacement must be >= 0, got {}", self.displacement)));
        }
        Ok(())
    }

    /// ds/σ
    pub fn x(&self) -> f64 {
        self.displacement / self.material.sigma
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let size = self.volume.cbrt();
        if self.displacement >= CONTINUUM_LIMIT * size {
            w.push(format!(
                "displacement {:.3e} m is not small against the solid's size {:.3e} m; continuum term unreliable",
                self.displacement, size
            ));
        }
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// ds ≤ σ
    SmallDisplacement,
    /// σ < ds < ḡ
    Intermediate,
    /// ds ≥ ḡ
    LargeDisplacement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBreakdown {
    pub short_distance: f64,
    pub long_distance: f64,
    pub total: f64,
    pub regime: Regime,
    pub chi: f64,
    pub xi: f64,
}

/// χ: ratio of long- to short-distance energy for small displacements.
pub fn chi(m: &DerivedMaterial) -> f64 {
    24.0 * PI.powf(1.5) / (m.q_hat * m.lattice_ratio().powi(3))
}

/// ξ: scale of the long-distance term relative to the saturated
/// short-distance term, per (ds/ḡ)².
pub fn xi(m: &DerivedMaterial) -> f64 {
    2.0 * PI.powf(1.5) / (m.q_hat * m.lattice_ratio())
}

/// Energy of the nuclei attracting their own displaced counterparts,
/// regardless of model.
pub fn short_distance_energy(s: &SuperposedSolid) -> f64 {
    let x = s.x();
    let tv = s.material.t_g_s * s.volume;
    if x <= QUADRATIC_UP_TO {
        tv * geometric_factor(s.geometry) / 12.0 * x * x
    } else {
        tv * profile_average_unchecked(s.geometry.profile(), x)
    }
}

/// Continuum energy 2π·α·G·V·ρ²·ds².
pub fn long_distance_energy(g: GeometryCase, ds: f64, rho: f64, volume: f64) -> f64 {
    TWO_PI * geometric_factor(g) * G * volume * rho * rho * ds * ds
}

pub fn classify(s: &SuperposedSolid) -> Regime {
    if s.displacement <= s.material.sigma {
        Regime::SmallDisplacement
    } else if s.displacement < s.material.g_bar {
        Regime::Intermediate
    } else {
        Regime::LargeDisplacement
    }
}

pub fn total_energy(s: &SuperposedSolid) -> EnergyBreakdown {
    let short = match s.model {
        Model::PenroseFull => short_distance_energy(s),
        Model::DiosiSmeared => 0.0,
    };
    let long = long_distance_energy(s.geometry, s.displacement, s.material.rho, s.volume);
    EnergyBreakdown {
        short_distance: short,
        long_distance: long,
        total: short + long,
        regime: classify(s),
        chi: chi(&s.material),
        xi: xi(&s.material),
    }
}

/// Three-band estimate: quadratic for ds ≪ σ, saturated T̄·V for
/// 5σ < ds ≤ ḡ, continuum for ds ≫ ḡ. Displacements between bands are
/// rejected. Under the smeared model only the continuum term exists.
pub fn rule_of_thumb_energy(s: &SuperposedSolid) -> Result<f64> {
    let m = &s.material;
    let ds = s.displacement;
    let alpha = geometric_factor(s.geometry);
    let tv = m.t_g_s * s.volume;
    if s.model == Model::DiosiSmeared {
        return Ok(long_distance_energy(s.geometry, ds, m.rho, s.volume));
    }
    if ds <= m.sigma / BAND_FACTOR {
        let x = ds / m.sigma;
        Ok(alpha / 12.0 * tv * x * x)
    } else if ds > MIDDLE_BAND_FROM * m.sigma && ds <= m.g_bar {
        Ok(tv)
    } else if ds >= BAND_FACTOR * m.g_bar {
        let y = ds / m.g_bar;
        Ok(alpha * xi(m) * tv * y * y)
    } else if ds <= MIDDLE_BAND_FROM * m.sigma {
        Err(Error::AmbiguousBand { ratio: ds / m.sigma, band: "between sigma/10 and 5 sigma" })
    } else {
        Err(Error::AmbiguousBand { ratio: ds / m.g_bar, band: "between g and 10 g" })
    }
}

/// ħ/E, with +∞ for zero energy.
pub fn lifetime(e: f64) -> Result<f64> {
    if !(e >= 0.0) {
        return Err(Error::invalid(format!("energy must be >= 0, got {e}")));
    }
    if e == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(HBAR / e)
}
