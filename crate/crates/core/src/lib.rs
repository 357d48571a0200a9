//! Diósi-Penrose energies and superposition lifetimes of solids and detector
//! components, with a brute-force gravitational-integration oracle for the
//! closed forms.

pub mod components;
pub mod constants;
pub mod detector;
pub mod error;
pub mod formulary;
pub mod materials;
mod numeric;
pub mod oracle;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
