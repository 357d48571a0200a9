//! Closed-form Diósi-Penrose formulary: nucleus energy, geometric factors and
//! functions, short- and long-distance contributions of a superposed solid,
//! and the lifetime criterion.

mod geometry;
mod nucleus;
mod solid;

pub use geometry::{geometric_factor, geometric_function, profile_average, GeometryCase, Profile};
pub use nucleus::{f_sigma, nucleus_dp_energy};
pub use solid::{
    chi, classify, lifetime, long_distance_energy, rule_of_thumb_energy, short_distance_energy, total_energy, xi,
    EnergyBreakdown, Model, Regime, SuperposedSolid, BAND_FACTOR, CONTINUUM_LIMIT, MIDDLE_BAND_FROM, QUADRATIC_UP_TO,
};
