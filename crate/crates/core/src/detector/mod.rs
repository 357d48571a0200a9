//! Single-photon detector: the avalanche transient, the lifetime of every
//! component it displaces, and the time-dependent criterion for a piezo
//! driven by the diode.

mod circuit;
mod criterion;

pub use circuit::{
    avalanche_current, current_squared_integral, piezo_quench_time, piezo_time_constant, piezo_voltage, quench_time,
    CircuitSpec,
};
pub use criterion::{generalized_lifetime, MAX_BISECTIONS};

use crate::components::{
    evaluate_capacitor, evaluate_conductor, evaluate_photodiode, piezo_displacement, piezo_dp_energy,
    piezo_long_distance_energy, CapacitorSpec, ComponentResult, ConductorSpec, Effect, PhotodiodeSpec, PiezoSpec,
};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::formulary::{lifetime, Model};

/// Working frequencies of PZT piezos reach up to about this value (Hz).
pub const PIEZO_MAX_FREQUENCY: f64 = 3e6;
/// The piezo criterion is searched up to this many charging time constants.
pub const PIEZO_HORIZON: f64 = 1e4;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorScenario {
    pub circuit: CircuitSpec,
    pub capacitor: CapacitorSpec,
    pub resistor: ConductorSpec,
    pub wire: ConductorSpec,
    pub photodiode: PhotodiodeSpec,
    pub piezo: Option<PiezoSpec>,
    pub model: Model,
}

/// One component's result, or the error that prevented it.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentOutcome {
    pub name: String,
    pub result: std::result::Result<ComponentResult, Error>,
}

/// Time-dependent piezo superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PiezoReport {
    /// R_d·C_p (s).
    pub time_constant: f64,
    /// Quench time of the piezo charging path (s).
    pub quench_time: f64,
    /// Lifetime from the generalized criterion under the scenario's model (s).
    pub lifetime: f64,
    /// Same with only the continuum contribution (s).
    pub long_distance_lifetime: f64,
    /// Plate displacement reached at the lifetime (m).
    pub displacement_at_lifetime: f64,
    /// Piezo voltage at the lifetime (V).
    pub voltage_at_lifetime: f64,
    /// Lifetime shorter than the piezo-path quench time.
    pub before_quench: bool,
    /// 1/T above the working frequencies of PZT piezos.
    pub frequency_warning: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeReport {
    pub model: Model,
    pub components: Vec<ComponentOutcome>,
    /// ∫I²dt over the avalanche (A²·s).
    pub i2t: f64,
    /// Quench time of the bias loop (s).
    pub quench_time: f64,
    pub piezo: Option<PiezoReport>,
    /// Component with the shortest lifetime.
    pub bottleneck: Option<String>,
    /// Sum of the component energies, interference neglected (J).
    pub combined_energy: f64,
    pub combined_lifetime: f64,
    pub notes: Vec<String>,
}

impl LifetimeReport {
    pub fn component(&self, name: &str) -> Option<&ComponentResult> {
        self.components.iter().find(|c| c.name == name).and_then(|c| c.result.as_ref().ok())
    }

    pub fn errors(&self) -> impl Iterator<Item = (&str, &Error)> {
        self.components.iter().filter_map(|c| c.result.as_ref().err().map(|e| (c.name.as_str(), e)))
    }
}

/// Energy of the piezo at time t under `model`.
pub fn piezo_energy_at(c: &CircuitSpec, p: &PiezoSpec, t: f64, model: Model) -> Result<f64> {
    let ds = piezo_displacement(p, piezo_voltage(c, p, t)?)?;
    piezo_dp_energy(p, ds, model)
}

fn piezo_long_energy_at(c: &CircuitSpec, p: &PiezoSpec, t: f64) -> Result<f64> {
    Ok(piezo_long_distance_energy(p, piezo_displacement(p, piezo_voltage(c, p, t)?)?))
}

/// Lifetime of the charging piezo from ∫₀^T E(t) dt = ħ.
pub fn evaluate_piezo(c: &CircuitSpec, p: &PiezoSpec, model: Model) -> Result<(ComponentResult, PiezoReport)> {
    p.validate()?;
    let tau = piezo_time_constant(c, p)?;
    let horizon = PIEZO_HORIZON * tau;
    piezo_energy_at(c, p, horizon, model)?;
    let t = generalized_lifetime(|t| piezo_energy_at(c, p, t, model).unwrap_or(f64::NAN), horizon)?;
    let t_long = generalized_lifetime(|t| piezo_long_energy_at(c, p, t).unwrap_or(f64::NAN), horizon)?;
    let (voltage, ds) = if t.is_finite() {
        let v = piezo_voltage(c, p, t)?;
        (v, piezo_displacement(p, v)?)
    } else {
        (c.excess_voltage, piezo_displacement(p, c.excess_voltage)?)
    };
    let quench = piezo_quench_time(c, p)?;
    let frequency_warning = t.is_finite() && 1.0 / t > PIEZO_MAX_FREQUENCY;

    let mut warnings = p.warnings();
    if c.capacitance < 10.0 * p.capacitance()? {
        warnings.push(format!(
            "bias capacitance {:.3e} F is not much larger than the piezo capacitance {:.3e} F; the charging curve assumes it is",
            c.capacitance,
            p.capacitance()?
        ));
    }
    if frequency_warning {
        warnings.push(format!("1/T = {:.3e} Hz exceeds typical PZT working frequencies of {PIEZO_MAX_FREQUENCY:.0e} Hz", 1.0 / t));
    }
    // Time-averaged energy ħ/T, so that ħ/E reproduces the lifetime.
    let effective = if t.is_finite() { HBAR / t } else { 0.0 };
    let detail = vec![Effect { label: "piezo extension (time-averaged)".into(), displacement: ds, energy: effective }];
    let ratio = ds / p.piezo.derived.sigma;
    let result = ComponentResult::assemble("piezo", detail, p.settling_time().ok(), ratio, warnings)?;
    let report = PiezoReport {
        time_constant: tau,
        quench_time: quench,
        lifetime: t,
        long_distance_lifetime: t_long,
        displacement_at_lifetime: ds,
        voltage_at_lifetime: voltage,
        before_quench: t < quench,
        frequency_warning,
    };
    Ok((result, report))
}

/// Shortest-lived component; ties go to the lexically first name.
pub fn bottleneck<'a>(results: impl IntoIterator<Item = &'a ComponentResult>) -> Option<&'a ComponentResult> {
    results.into_iter().min_by(|a, b| a.lifetime.total_cmp(&b.lifetime).then_with(|| a.name.cmp(&b.name)))
}

pub fn evaluate_detector(s: &DetectorScenario) -> Result<LifetimeReport> {
    let c = &s.circuit;
    c.validate()?;
    let i2t = current_squared_integral(c);
    let model = s.model;
    let mut components = vec![
        ComponentOutcome {
            name: "capacitor".into(),
            result: evaluate_capacitor(&s.capacitor, c.mean_capacitor_voltage(), c.excess_voltage, model),
        },
        ComponentOutcome { name: "resistor".into(), result: evaluate_conductor("resistor", &s.resistor, i2t, model) },
        ComponentOutcome { name: "wire".into(), result: evaluate_conductor("wire", &s.wire, i2t, model) },
        ComponentOutcome { name: "photodiode".into(), result: evaluate_photodiode(&s.photodiode, i2t, model) },
    ];
    let mut piezo = None;
    if let Some(p) = &s.piezo {
        let result = evaluate_piezo(c, p, model).map(|(r, rep)| {
            piezo = Some(rep);
            r
        });
        components.push(ComponentOutcome { name: "piezo".into(), result });
    }
    let ok: Vec<&ComponentResult> = components.iter().filter_map(|o| o.result.as_ref().ok()).collect();
    let combined_energy: f64 = ok.iter().map(|r| r.energy).sum();
    let bottleneck = bottleneck(ok.iter().copied()).map(|r| r.name.clone());
    let mut notes = vec!["combined energy is the sum of the component energies with interference neglected; an interpretation, not a prediction".to_string()];
    if let Some(p) = &piezo {
        notes.push(format!(
            "bias-loop quench {:.3e} s; piezo-path quench {:.3e} s; piezo lifetime {} the piezo-path quench",
            quench_time(c),
            p.quench_time,
            if p.before_quench { "precedes" } else { "does not precede" }
        ));
    }
    Ok(LifetimeReport {
        model,
        components,
        i2t,
        quench_time: quench_time(c),
        piezo,
        bottleneck,
        combined_energy,
        combined_lifetime: lifetime(combined_energy)?,
        notes,
    })
}

/// Two-column time series in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub name: &'static str,
    /// Column headers with units.
    pub columns: [&'static str; 2],
    pub rows: Vec<[f64; 2]>,
}

/// Samples over the trace window.
pub const TRACE_POINTS: usize = 401;

/// I(t) over twice the quench time and, with a piezo, V(t) and E(t) over
/// twice the later of its lifetime and quench time.
pub fn traces(s: &DetectorScenario, report: &LifetimeReport) -> Result<Vec<Trace>> {
    let c = &s.circuit;
    let grid = |end: f64| (0..TRACE_POINTS).map(move |i| end * i as f64 / (TRACE_POINTS - 1) as f64);
    let mut out = vec![Trace {
        name: "current",
        columns: ["t [s]", "I [A]"],
        rows: grid(2.0 * report.quench_time).map(|t| [t, avalanche_current(c, t)]).collect(),
    }];
    if let (Some(p), Some(r)) = (&s.piezo, &report.piezo) {
        let end = 2.0 * if r.lifetime.is_finite() { r.lifetime.max(r.quench_time) } else { r.quench_time };
        out.push(Trace {
            name: "voltage",
            columns: ["t [s]", "V [V]"],
            rows: grid(end).map(|t| Ok([t, piezo_voltage(c, p, t)?])).collect::<Result<_>>()?,
        });
        out.push(Trace {
            name: "energy",
            columns: ["t [s]", "E_G [J]"],
            rows: grid(end).map(|t| Ok([t, piezo_energy_at(c, p, t, s.model)?])).collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::circuit::tests::reference as circuit;
    use super::*;
    use crate::components::fixtures::at;
    use std::f64::consts::PI;

    pub(crate) fn scenario(piezo: bool) -> DetectorScenario {
        let si = crate::components::fixtures::with("Si", |m| m.rho_ohm = Some(0.05));
        DetectorScenario {
            circuit: circuit(),
            capacitor: CapacitorSpec {
                area: 49e-4,
                thickness: 1e-3,
                plate_thickness: 0.03e-3,
                dielectric: at("Al2O3"),
                plates: at("Cu"),
            },
            resistor: ConductorSpec { length: 0.13, effective_length: 0.13, radius: 1e-3, material: si },
            wire: ConductorSpec { length: 2.0, effective_length: 0.04, radius: 0.5e-3, material: at("Cu") },
            photodiode: PhotodiodeSpec { thickness: 70e-6, radius: 250e-6, material: at("Si"), resistance: 500.0 },
            piezo: piezo.then(|| PiezoSpec {
                area: PI * 1.5e-3 * 1.5e-3,
                thickness: 0.2e-3,
                plate_thickness: 0.1e-3,
                piezo: at("PZT"),
                plates: at("Cu"),
                layers: 1,
            }),
            model: Model::PenroseFull,
        }
    }

    fn within(x: f64, target: f64, rel: f64) -> bool {
        (x / target - 1.0).abs() <= rel
    }

    #[test]
    fn detector_lifetimes() {
        let r = evaluate_detector(&scenario(false)).unwrap();
        assert_eq!(r.bottleneck.as_deref(), Some("capacitor"));
        assert!(within(r.component("capacitor").unwrap().lifetime, 0.070, 0.35));
        assert!(within(r.component("resistor").unwrap().lifetime, 45.0, 0.25));
        assert!(within(r.component("photodiode").unwrap().lifetime, 1000.0, 0.25));
        let sum: f64 = r.components.iter().map(|c| c.result.as_ref().unwrap().energy).sum();
        assert_eq!(r.combined_energy, sum);
        assert!(r.piezo.is_none());
    }

    #[test]
    fn piezo_lifetime_precedes_quench() {
        let s = scenario(true);
        let r = evaluate_detector(&s).unwrap();
        let p = r.piezo.as_ref().unwrap();
        assert!(within(p.lifetime, 0.52e-6, 0.1), "T = {}", p.lifetime);
        assert!(within(p.long_distance_lifetime, 0.54e-6, 0.1));
        assert!(within(p.displacement_at_lifetime, 25e-10, 0.1));
        assert!(within(p.time_constant, 0.66e-6, 0.02));
        assert!(within(p.quench_time, 3.7e-6, 0.05));
        assert!(p.before_quench && !p.frequency_warning);
        assert_eq!(r.bottleneck.as_deref(), Some("piezo"));
        let piezo = r.component("piezo").unwrap();
        assert!((piezo.lifetime / p.lifetime - 1.0).abs() < 1e-12);
        let traces = traces(&s, &r).unwrap();
        assert_eq!(traces.len(), 3);
        assert!(traces.iter().all(|t| t.rows.len() == TRACE_POINTS));
    }

    #[test]
    fn hardened_piezo() {
        let mut s = scenario(true);
        s.circuit.excess_voltage = 50.0;
        let p = s.piezo.as_mut().unwrap();
        p.plates = at("Pt");
        p.plate_thickness = 0.2e-3;
        let r = evaluate_detector(&s).unwrap();
        let pr = r.piezo.as_ref().unwrap();
        assert!(within(pr.lifetime, 0.1e-6, 0.25), "T = {}", pr.lifetime);
        assert!(pr.frequency_warning);
        assert!(r.component("piezo").unwrap().settling_warning);
    }

    #[test]
    fn smeared_model_lengthens_bottleneck() {
        let full = evaluate_detector(&scenario(false)).unwrap();
        let mut s = scenario(false);
        s.model = Model::DiosiSmeared;
        let smeared = evaluate_detector(&s).unwrap();
        let ratio = smeared.component("capacitor").unwrap().lifetime / full.component("capacitor").unwrap().lifetime;
        assert!(ratio > 30.0, "ratio {ratio}");
    }

    #[test]
    fn component_errors_are_reported_per_entry() {
        let mut s = scenario(false);
        s.wire.material.material.alpha_l = None;
        let r = evaluate_detector(&s).unwrap();
        assert_eq!(r.errors().count(), 1);
        assert_eq!(r.bottleneck.as_deref(), Some("capacitor"));
    }

    #[test]
    fn bottleneck_ignores_order() {
        let r = evaluate_detector(&scenario(true)).unwrap();
        let mut v: Vec<&ComponentResult> = r.components.iter().map(|c| c.result.as_ref().unwrap()).collect();
        let a = bottleneck(v.iter().copied()).unwrap().name.clone();
        v.reverse();
        assert_eq!(bottleneck(v.iter().copied()).unwrap().name, a);
    }
}
