//! Strategies shared by the property suites.
#![allow(dead_code)]

use dpsolid::constants::AMU;
use dpsolid::oracle::{dp_energy, GaussianSite, MassDistribution, QuadratureSpec, SuperposedPair};
use proptest::prelude::*;

pub fn site() -> impl Strategy<Value = GaussianSite> {
    (prop::array::uniform3(-5e-11f64..5e-11), 1.0f64..200.0, 3e-12f64..2e-11)
        .prop_map(|(center, a, sigma)| GaussianSite { center, mass: a * AMU, sigma })
}

pub fn cloud() -> impl Strategy<Value = MassDistribution> {
    prop::collection::vec(site(), 1..5).prop_map(MassDistribution::GaussianCloud)
}

/// A cloud and a rearrangement of the same nuclei.
pub fn rearranged() -> impl Strategy<Value = (MassDistribution, MassDistribution)> {
    prop::collection::vec((site(), site()), 1..5).prop_map(|v| {
        let a = v.iter().map(|(s, _)| *s).collect();
        let b = v.iter().map(|(s, t)| GaussianSite { mass: s.mass, ..*t }).collect();
        (MassDistribution::GaussianCloud(a), MassDistribution::GaussianCloud(b))
    })
}

pub fn shift() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-3e-11f64..3e-11)
}

pub fn energy(p: &SuperposedPair, q: &QuadratureSpec) -> f64 {
    dp_energy(p, q).unwrap().value
}

/// Agreement within the summed quadrature error estimates.
pub fn within_estimate(p: &SuperposedPair, r: &SuperposedPair, q: &QuadratureSpec) -> bool {
    let (a, b) = (dp_energy(p, q).unwrap(), dp_energy(r, q).unwrap());
    (a.value - b.value).abs() <= a.error + b.error + 1e-12 * a.value.abs()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + f64::MIN_POSITIVE
}
