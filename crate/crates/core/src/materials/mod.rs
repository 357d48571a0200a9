//! Per-solid constants and the derived microscopic quantities: mean nucleus
//! mass, mean lattice constant, quadratic mass factor, spatial variation of
//! the nuclei and the characteristic energy density.

mod catalog;

pub use catalog::{Catalog, MaterialPatch};

use crate::constants::{AMU, G, HBAR, K_B, SQRT_PI};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// One constituent of a composition.
#[derive(Debug, Clone, PartialEq)]
pub struct Constituent {
    pub element: String,
    /// Nucleus mass (kg).
    pub mass: f64,
    /// Count fraction N_i/N.
    pub fraction: f64,
}

/// Nucleus species of a solid with their count fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub entries: Vec<Constituent>,
}

impl Composition {
    /// A single-element solid with nucleus mass `mass` (kg).
    pub fn single(element: &str, mass: f64) -> Self {
        Composition {
            entries: vec![Constituent { element: element.to_string(), mass, fraction: 1.0 }],
        }
    }

    /// Builds a composition from (element, mass in u, count fraction) triples.
    pub fn from_amu(entries: &[(&str, f64, f64)]) -> Result<Self> {
        let c = Composition {
            entries: entries
                .iter()
                .map(|&(e, m, f)| Constituent { element: e.to_string(), mass: m * AMU, fraction: f })
                .collect(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::invalid("empty composition"));
        }
        let mut sum = 0.0;
        for c in &self.entries {
            if !(c.mass > 0.0 && c.mass.is_finite()) {
                return Err(Error::invalid(format!("nucleus mass of {} must be positive", c.element)));
            }
            if !(c.fraction > 0.0 && c.fraction <= 1.0) {
                return Err(Error::invalid(format!("fraction of {} must lie in (0, 1]", c.element)));
            }
            sum += c.fraction;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("composition fractions sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// Per-solid constants in SI units. Optional fields are needed only by
/// particular component models.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    pub composition: Composition,
    /// Mass density (kg·m⁻³).
    pub rho: f64,
    /// Debye temperature (K).
    pub theta_d: f64,
    /// Longitudinal sound velocity (m·s⁻¹).
    pub v_par: Option<f64>,
    /// Transverse sound velocity (m·s⁻¹).
    pub v_perp: Option<f64>,
    /// Linear thermal expansion coefficient (K⁻¹).
    pub alpha_l: Option<f64>,
    /// Electrical resistivity (Ω·m).
    pub rho_ohm: Option<f64>,
    /// Modulus of elasticity (Pa).
    pub e_e: Option<f64>,
    /// Relative permittivity.
    pub eps_r: Option<f64>,
    /// Piezoelectric coefficient (m·V⁻¹).
    pub d33: Option<f64>,
}

impl Material {
    pub fn validate(&self) -> Result<()> {
        self.composition.validate()?;
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::invalid(format!("{}: rho must be positive", self.name)));
        }
        if !(self.theta_d > 0.0 && self.theta_d.is_finite()) {
            return Err(Error::invalid(format!("{}: theta_d must be positive", self.name)));
        }
        let optional = [
            ("v_par", self.v_par),
            ("v_perp", self.v_perp),
            ("alpha_l", self.alpha_l),
            ("rho_ohm", self.rho_ohm),
            ("e_e", self.e_e),
            ("eps_r", self.eps_r),
            ("d33", self.d33),
        ];
        for (field, v) in optional {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::invalid(format!("{}: {field} must be positive", self.name)));
                }
            }
        }
        Ok(())
    }

    fn need(&self, v: Option<f64>, property: &'static str) -> Result<f64> {
        v.ok_or_else(|| Error::missing(&self.name, property))
    }

    pub fn v_par(&self) -> Result<f64> {
        self.need(self.v_par, "v_par")
    }
    pub fn alpha_l(&self) -> Result<f64> {
        self.need(self.alpha_l, "alpha_l")
    }
    pub fn rho_ohm(&self) -> Result<f64> {
        self.need(self.rho_ohm, "rho_ohm")
    }
    pub fn e_e(&self) -> Result<f64> {
        self.need(self.e_e, "e_e")
    }
    pub fn eps_r(&self) -> Result<f64> {
        self.need(self.eps_r, "eps_r")
    }
    pub fn d33(&self) -> Result<f64> {
        self.need(self.d33, "d33")
    }

    /// Mean nucleus mass (kg).
    pub fn mean_mass(&self) -> Result<f64> {
        mean_mass(&self.composition)
    }

    /// Mean lattice constant (m): (m̄/ρ)^(1/3).
    pub fn lattice_constant(&self) -> Result<f64> {
        Ok((self.mean_mass()? / self.rho).cbrt())
    }
}

/// Quantities derived from a material at a given temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedMaterial {
    pub name: String,
    /// Mass density (kg·m⁻³).
    pub rho: f64,
    /// Mean nucleus mass (kg).
    pub m_bar: f64,
    /// Mean lattice constant (m).
    pub g_bar: f64,
    /// Quadratic mass factor.
    pub q_hat: f64,
    /// Spatial variation of the nuclei (m).
    pub sigma: f64,
    /// Characteristic energy density (J·m⁻³).
    pub t_g_s: f64,
    /// Temperature (K) at which sigma was computed.
    pub temperature: f64,
}

impl DerivedMaterial {
    /// Builds derived quantities from raw parameters rather than a catalog
    /// entry. Useful for the generic q̂ = 1, ḡ/σ = 20 studies.
    pub fn from_parts(name: &str, rho: f64, m_bar: f64, q_hat: f64, sigma: f64, temperature: f64) -> Result<Self> {
        if !(rho > 0.0 && m_bar > 0.0 && sigma > 0.0 && q_hat >= 1.0) {
            return Err(Error::invalid("rho, m_bar, sigma must be positive and q_hat >= 1"));
        }
        let g_bar = (m_bar / rho).cbrt();
        Ok(DerivedMaterial {
            name: name.to_string(),
            rho,
            m_bar,
            g_bar,
            q_hat,
            sigma,
            t_g_s: energy_density(q_hat, rho, g_bar, sigma),
            temperature,
        })
    }

    /// Ratio ḡ/σ.
    pub fn lattice_ratio(&self) -> f64 {
        self.g_bar / self.sigma
    }

    /// Characteristic rate per volume T̄_G^S/ħ (s⁻¹·m⁻³).
    pub fn rate_density(&self) -> f64 {
        self.t_g_s / HBAR
    }
}

fn energy_density(q_hat: f64, rho: f64, g_bar: f64, sigma: f64) -> f64 {
    G * q_hat * rho * rho * g_bar.powi(3) / (SQRT_PI * sigma)
}

/// Mean nucleus mass Σ (N_i/N)·m_i (kg).
pub fn mean_mass(c: &Composition) -> Result<f64> {
    c.validate()?;
    Ok(c.entries.iter().map(|e| e.fraction * e.mass).sum())
}

/// Quadratic mass factor (Σ f_i m_i²)/(Σ f_i m_i)².
pub fn quadratic_mass_factor(c: &Composition) -> Result<f64> {
    let m = mean_mass(c)?;
    let m2: f64 = c.entries.iter().map(|e| e.fraction * e.mass * e.mass).sum();
    // guard against rounding below 1 for single-element solids
    Ok((m2 / (m * m)).max(1.0))
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("temperature must be positive, got {t}")));
    }
    Ok(())
}

/// Spatial variation from the Debye temperature: ħ·sqrt(3T/(m̄ k_B))/Θ_D.
pub fn sigma_debye(m: &Material, t: f64) -> Result<f64> {
    check_temperature(t)?;
    if !(m.theta_d > 0.0) {
        return Err(Error::missing(&m.name, "theta_d"));
    }
    let mb = m.mean_mass()?;
    Ok(HBAR * (3.0 * t / (mb * K_B)).sqrt() / m.theta_d)
}

/// Spatial variation from the sound velocities. A missing transverse
/// velocity is taken equal to the longitudinal one.
pub fn sigma_sound(m: &Material, t: f64) -> Result<f64> {
    check_temperature(t)?;
    let vp = m.v_par()?;
    let vt = m.v_perp.unwrap_or(vp);
    let mb = m.mean_mass()?;
    let g = m.lattice_constant()?;
    let inv = vp.powi(-3) + 2.0 * vt.powi(-3);
    Ok((3.0 * K_B * t / mb).sqrt() * (inv * g.powi(3) / (18.0 * PI * PI)).cbrt())
}

/// All derived quantities at temperature `t`, with σ taken from Θ_D.
pub fn derive(m: &Material, t: f64) -> Result<DerivedMaterial> {
    m.validate()?;
    let m_bar = m.mean_mass()?;
    let q_hat = quadratic_mass_factor(&m.composition)?;
    let sigma = sigma_debye(m, t)?;
    let g_bar = (m_bar / m.rho).cbrt();
    Ok(DerivedMaterial {
        name: m.name.clone(),
        rho: m.rho,
        m_bar,
        g_bar,
        q_hat,
        sigma,
        t_g_s: energy_density(q_hat, m.rho, g_bar, sigma),
        temperature: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn al() -> Material {
        Catalog::bundled().get("Al").unwrap().clone()
    }

    #[test]
    fn mean_mass_single_element_is_identity() {
        let c = Composition::from_amu(&[("X", 42.0, 1.0)]).unwrap();
        assert_relative_eq!(mean_mass(&c).unwrap(), 42.0 * AMU, max_relative = 1e-15);
        assert_eq!(quadratic_mass_factor(&c).unwrap(), 1.0);
    }

    #[test]
    fn empty_composition_rejected() {
        let c = Composition { entries: vec![] };
        assert!(matches!(mean_mass(&c), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn fractions_must_sum_to_one() {
        assert!(Composition::from_amu(&[("A", 10.0, 0.5), ("B", 20.0, 0.4)]).is_err());
    }

    #[test]
    fn pzt_mean_mass() {
        let c = Composition::from_amu(&[("Pb", 207.2, 0.2), ("Zr", 91.22, 0.1), ("Ti", 47.87, 0.1), ("O", 16.00, 0.6)])
            .unwrap();
        assert_relative_eq!(mean_mass(&c).unwrap() / AMU, 64.94, max_relative = 1e-3);
        assert_relative_eq!(quadratic_mass_factor(&c).unwrap(), 2.32, max_relative = 3e-3);
    }

    #[test]
    fn alumina_quadratic_factor() {
        let c = Composition::from_amu(&[("Al", 26.98, 0.4), ("O", 16.0, 0.6)]).unwrap();
        assert_relative_eq!(quadratic_mass_factor(&c).unwrap(), 1.07, max_relative = 3e-3);
    }

    #[test]
    fn missing_velocity_reported() {
        let mut m = al();
        m.v_par = None;
        assert_eq!(sigma_sound(&m, 300.0), Err(Error::missing("Al", "v_par")));
    }

    #[test]
    fn derived_invariants() {
        let d = derive(&al(), 300.0).unwrap();
        assert_relative_eq!(d.g_bar.powi(3) * d.rho, d.m_bar, max_relative = 1e-12);
        assert_relative_eq!(d.t_g_s, G * d.q_hat * d.rho.powi(2) * d.g_bar.powi(3) / (SQRT_PI * d.sigma), max_relative = 1e-12);
        assert_eq!(d.temperature, 300.0);
    }

    proptest! {
        #[test]
        fn sigma_scales_with_root_temperature(t in 1.0f64..2000.0) {
            let m = al();
            let s1 = sigma_debye(&m, t).unwrap();
            let s4 = sigma_debye(&m, 4.0 * t).unwrap();
            prop_assert!((s4 / s1 - 2.0).abs() < 1e-12);
        }

        #[test]
        fn energy_density_linear_in_rho_at_fixed_composition(scale in 0.1f64..10.0) {
            let mut m = al();
            let d1 = derive(&m, 300.0).unwrap();
            m.rho *= scale;
            let d2 = derive(&m, 300.0).unwrap();
            // ḡ³ρ² = m̄ρ, and σ depends only on m̄ and Θ_D
            prop_assert!((d2.t_g_s / d1.t_g_s / scale - 1.0).abs() < 1e-12);
        }

        #[test]
        fn energy_density_quadratic_in_rho_at_fixed_lattice(scale in 0.1f64..10.0) {
            let d1 = DerivedMaterial::from_parts("x", 2700.0, 27.0 * AMU, 1.0, 1e-11, 300.0).unwrap();
            let d2 = DerivedMaterial::from_parts("x", 2700.0 * scale, 27.0 * AMU * scale, 1.0, 1e-11, 300.0).unwrap();
            prop_assert!((d2.g_bar / d1.g_bar - 1.0).abs() < 1e-12);
            prop_assert!((d2.t_g_s / d1.t_g_s / (scale * scale) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn quadratic_factor_at_least_one(m1 in 1.0f64..250.0, m2 in 1.0f64..250.0, f in 0.01f64..0.99) {
            let c = Composition::from_amu(&[("A", m1, f), ("B", m2, 1.0 - f)]).unwrap();
            let q = quadratic_mass_factor(&c).unwrap();
            prop_assert!(q >= 1.0);
            if (m1 - m2).abs() > 1e-3 {
                prop_assert!(q > 1.0);
            }
        }
    }
}
