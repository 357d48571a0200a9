//! Physical constants (CODATA 2018 values).

use std::f64::consts::PI;

/// Fundamental constants used by every formula in the crate, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational constant (m³·kg⁻¹·s⁻²).
    pub g: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Boltzmann constant (J·K⁻¹).
    pub k_b: f64,
    /// Atomic mass unit (kg).
    pub u: f64,
    /// Electric constant (F·m⁻¹).
    pub eps0: f64,
    /// Elementary charge (C).
    pub e: f64,
    /// Electron mass (kg).
    pub m_e: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    g: 6.674_30e-11,
    hbar: 1.054_571_817e-34,
    k_b: 1.380_649e-23,
    u: 1.660_539_066_60e-27,
    eps0: 8.854_187_812_8e-12,
    e: 1.602_176_634e-19,
    m_e: 9.109_383_701_5e-31,
};

pub const G: f64 = CODATA.g;
pub const HBAR: f64 = CODATA.hbar;
pub const K_B: f64 = CODATA.k_b;
pub const AMU: f64 = CODATA.u;
pub const EPS0: f64 = CODATA.eps0;
pub const E_CHARGE: f64 = CODATA.e;
pub const M_E: f64 = CODATA.m_e;

/// √π, used by the nucleus energy normalisation.
pub const SQRT_PI: f64 = 1.772_453_850_905_515_9;

/// Default temperature (K) for derived material quantities.
pub const ROOM_TEMPERATURE: f64 = 300.0;

pub(crate) const TWO_PI: f64 = 2.0 * PI;
