//! Scenario files: TOML with a unit on every dimensioned value.
//!
//! ```toml
//! version = 1
//! model = "penrose"
//! temperature = "300 K"
//!
//! [materials.Si-doped]
//! base = "Si"
//! rho_ohm = "5 Ω·cm"
//!
//! [solid]
//! geometry = "displaced-plate"
//! material = "Al"
//! volume = "1 cm3"
//! displacement = "0.2 Å"
//! ```
//!
//! A file may instead carry a `[component]` section (with `kind`) or a
//! `[detector]` section with `circuit`, `capacitor`, `resistor`, `wire`,
//! `photodiode` and optionally `piezo` tables.

use crate::components::{
    evaluate_capacitor, evaluate_conductor, evaluate_photodiode, piezo_displacement, piezo_dp_energy, CapacitorSpec,
    ComponentResult, ConductorSpec, Effect, MaterialAt, PhotodiodeSpec, PiezoSpec,
};
use crate::constants::ROOM_TEMPERATURE;
use crate::detector::{CircuitSpec, DetectorScenario};
use crate::error::{Error, Result};
use crate::formulary::{GeometryCase, Model};
use crate::materials::{Catalog, MaterialPatch};
use crate::units::{parse_as, Dim};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Scenarios shipped with the library.
pub const BUNDLED: &[(&str, &str)] = &[
    ("solid", include_str!("../scenarios/solid.toml")),
    ("detector", include_str!("../scenarios/detector.toml")),
    ("piezo", include_str!("../scenarios/piezo.toml")),
    ("hardened-piezo", include_str!("../scenarios/hardened-piezo.toml")),
];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    version: u32,
    model: Option<String>,
    temperature: Option<String>,
    #[serde(default)]
    materials: BTreeMap<String, MaterialPatch>,
    solid: Option<RawSolid>,
    component: Option<RawComponent>,
    detector: Option<RawDetector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolid {
    geometry: String,
    material: String,
    volume: String,
    displacement: Option<String>,
    sweep: Option<RawSweep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    from: String,
    to: String,
    points: usize,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RawComponent {
    Capacitor(RawCapacitorDrive),
    Conductor(RawConductorDrive),
    Photodiode(RawPhotodiodeDrive),
    Piezo(RawPiezoDrive),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCapacitor {
    area: String,
    thickness: String,
    plate_thickness: String,
    dielectric: String,
    plates: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCapacitorDrive {
    area: String,
    thickness: String,
    plate_thickness: String,
    dielectric: String,
    plates: String,
    voltage: String,
    voltage_change: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConductor {
    length: String,
    effective_length: Option<String>,
    radius: String,
    material: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConductorDrive {
    name: Option<String>,
    length: String,
    effective_length: Option<String>,
    radius: String,
    material: String,
    current_squared_integral: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhotodiode {
    thickness: String,
    radius: String,
    material: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhotodiodeDrive {
    thickness: String,
    radius: String,
    material: String,
    resistance: String,
    current_squared_integral: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiezo {
    area: Option<String>,
    diameter: Option<String>,
    thickness: String,
    plate_thickness: String,
    piezo: String,
    plates: String,
    layers: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiezoDrive {
    area: Option<String>,
    diameter: Option<String>,
    thickness: String,
    plate_thickness: String,
    piezo: String,
    plates: String,
    layers: Option<u32>,
    voltage: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    breakdown_voltage: String,
    excess_voltage: String,
    diode_resistance: String,
    series_resistance: String,
    capacitance: String,
    latching_current: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetector {
    circuit: RawCircuit,
    capacitor: RawCapacitor,
    resistor: RawConductor,
    wire: RawConductor,
    photodiode: RawPhotodiode,
    piezo: Option<RawPiezo>,
}

/// Log-spaced displacements.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.from];
        }
        let r = (self.to / self.from).ln();
        (0..n).map(|i| self.from * (r * i as f64 / (n - 1) as f64).exp()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolidSection {
    pub geometry: GeometryCase,
    pub material: MaterialAt,
    /// Volume (m³).
    pub volume: f64,
    /// Displacement (m).
    pub displacement: Option<f64>,
    pub sweep: Option<Sweep>,
}

/// A single component with the drive that displaces it.
#[derive(Debug, Clone, PartialEq)]
pub enum ComponentSection {
    Capacitor { spec: CapacitorSpec, voltage: f64, voltage_change: f64 },
    Conductor { name: String, spec: ConductorSpec, i2t: f64 },
    Photodiode { spec: PhotodiodeSpec, i2t: f64 },
    Piezo { spec: PiezoSpec, voltage: f64 },
}

impl ComponentSection {
    pub fn evaluate(&self, model: Model) -> Result<ComponentResult> {
        match self {
            ComponentSection::Capacitor { spec, voltage, voltage_change } => {
                evaluate_capacitor(spec, *voltage, *voltage_change, model)
            }
            ComponentSection::Conductor { name, spec, i2t } => evaluate_conductor(name, spec, *i2t, model),
            ComponentSection::Photodiode { spec, i2t } => evaluate_photodiode(spec, *i2t, model),
            ComponentSection::Piezo { spec, voltage } => {
                spec.validate()?;
                let ds = piezo_displacement(spec, *voltage)?;
                let detail = vec![Effect { label: "piezo extension".into(), displacement: ds, energy: piezo_dp_energy(spec, ds, model)? }];
                ComponentResult::assemble("piezo", detail, spec.settling_time().ok(), ds / spec.piezo.derived.sigma, spec.warnings())
            }
        }
    }
}

/// Overrides taking precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub catalog: Option<Catalog>,
    pub temperature: Option<f64>,
    pub model: Option<Model>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: Model,
    /// Temperature (K).
    pub temperature: f64,
    /// Catalog after the file's overrides.
    pub catalog: Catalog,
    pub solid: Option<SolidSection>,
    pub component: Option<ComponentSection>,
    pub detector: Option<DetectorScenario>,
}

struct Ctx<'a> {
    catalog: &'a Catalog,
    temperature: f64,
}

impl Ctx<'_> {
    fn material(&self, field: &str, name: &str) -> Result<MaterialAt> {
        let m = self.catalog.get(name).map_err(|e| Error::invalid(format!("{field}: {e}")))?;
        MaterialAt::new(m, self.temperature)
    }
}

fn q(field: &str, text: &str, dim: Dim) -> Result<f64> {
    parse_as(text, dim).map_err(|e| Error::Unit(format!("{field}: {e}")))
}

fn capacitor(ctx: &Ctx, at: &str, r: &RawCapacitor) -> Result<CapacitorSpec> {
    let c = CapacitorSpec {
        area: q(&format!("{at}.area"), &r.area, Dim::AREA)?,
        thickness: q(&format!("{at}.thickness"), &r.thickness, Dim::LENGTH)?,
        plate_thickness: q(&format!("{at}.plate_thickness"), &r.plate_thickness, Dim::LENGTH)?,
        dielectric: ctx.material(&format!("{at}.dielectric"), &r.dielectric)?,
        plates: ctx.material(&format!("{at}.plates"), &r.plates)?,
    };
    c.validate()?;
    Ok(c)
}

fn conductor(ctx: &Ctx, at: &str, r: &RawConductor) -> Result<ConductorSpec> {
    let length = q(&format!("{at}.length"), &r.length, Dim::LENGTH)?;
    let c = ConductorSpec {
        length,
        effective_length: match &r.effective_length {
            Some(t) => q(&format!("{at}.effective_length"), t, Dim::LENGTH)?,
            None => length,
        },
        radius: q(&format!("{at}.radius"), &r.radius, Dim::LENGTH)?,
        material: ctx.material(&format!("{at}.material"), &r.material)?,
    };
    c.validate()?;
    Ok(c)
}

fn photodiode(ctx: &Ctx, at: &str, r: &RawPhotodiode, resistance: f64) -> Result<PhotodiodeSpec> {
    let p = PhotodiodeSpec {
        thickness: q(&format!("{at}.thickness"), &r.thickness, Dim::LENGTH)?,
        radius: q(&format!("{at}.radius"), &r.radius, Dim::LENGTH)?,
        material: ctx.material(&format!("{at}.material"), &r.material)?,
        resistance,
    };
    p.validate()?;
    Ok(p)
}

fn piezo(ctx: &Ctx, at: &str, r: &RawPiezo) -> Result<PiezoSpec> {
    let area = match (&r.area, &r.diameter) {
        (Some(a), None) => q(&format!("{at}.area"), a, Dim::AREA)?,
        (None, Some(d)) => {
            let d = q(&format!("{at}.diameter"), d, Dim::LENGTH)?;
            PI * d * d / 4.0
        }
        _ => return Err(Error::invalid(format!("{at}: give exactly one of area and diameter"))),
    };
    let p = PiezoSpec {
        area,
        thickness: q(&format!("{at}.thickness"), &r.thickness, Dim::LENGTH)?,
        plate_thickness: q(&format!("{at}.plate_thickness"), &r.plate_thickness, Dim::LENGTH)?,
        piezo: ctx.material(&format!("{at}.piezo"), &r.piezo)?,
        plates: ctx.material(&format!("{at}.plates"), &r.plates)?,
        layers: r.layers.unwrap_or(1),
    };
    p.validate()?;
    Ok(p)
}

fn circuit(r: &RawCircuit) -> Result<CircuitSpec> {
    let c = CircuitSpec {
        breakdown_voltage: q("detector.circuit.breakdown_voltage", &r.breakdown_voltage, Dim::VOLTAGE)?,
        excess_voltage: q("detector.circuit.excess_voltage", &r.excess_voltage, Dim::VOLTAGE)?,
        diode_resistance: q("detector.circuit.diode_resistance", &r.diode_resistance, Dim::RESISTANCE)?,
        series_resistance: q("detector.circuit.series_resistance", &r.series_resistance, Dim::RESISTANCE)?,
        capacitance: q("detector.circuit.capacitance", &r.capacitance, Dim::CAPACITANCE)?,
        latching_current: q("detector.circuit.latching_current", &r.latching_current, Dim::CURRENT)?,
    };
    c.validate()?;
    Ok(c)
}

impl Scenario {
    pub fn parse(text: &str, overrides: &Overrides) -> Result<Scenario> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.version != SCHEMA_VERSION {
            return Err(Error::invalid(format!("unsupported scenario version {} (expected {SCHEMA_VERSION})", raw.version)));
        }
        let model = match (overrides.model, &raw.model) {
            (Some(m), _) => m,
            (None, Some(s)) => s.parse()?,
            (None, None) => Model::PenroseFull,
        };
        let temperature = match (overrides.temperature, &raw.temperature) {
            (Some(t), _) => t,
            (None, Some(s)) => q("temperature", s, Dim::TEMPERATURE)?,
            (None, None) => ROOM_TEMPERATURE,
        };
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::invalid(format!("temperature must be positive, got {temperature} K")));
        }
        let mut catalog = overrides.catalog.clone().unwrap_or_else(Catalog::bundled);
        for (name, patch) in &raw.materials {
            catalog.apply_patch(name, patch).map_err(|e| Error::invalid(format!("materials.{name}: {e}")))?;
        }
        let ctx = Ctx { catalog: &catalog, temperature };

        let solid = raw
            .solid
            .map(|s| -> Result<SolidSection> {
                let sweep = s
                    .sweep
                    .map(|w| -> Result<Sweep> {
                        let sw = Sweep {
                            from: q("solid.sweep.from", &w.from, Dim::LENGTH)?,
                            to: q("solid.sweep.to", &w.to, Dim::LENGTH)?,
                            points: w.points,
                        };
                        if !(sw.from > 0.0 && sw.to > sw.from && sw.points >= 2) {
                            return Err(Error::invalid("solid.sweep needs 0 < from < to and at least 2 points"));
                        }
                        Ok(sw)
                    })
                    .transpose()?;
                Ok(SolidSection {
                    geometry: s.geometry.parse().map_err(|e| Error::invalid(format!("solid.geometry: {e}")))?,
                    material: ctx.material("solid.material", &s.material)?,
                    volume: q("solid.volume", &s.volume, Dim::VOLUME)?,
                    displacement: s.displacement.map(|d| q("solid.displacement", &d, Dim::LENGTH)).transpose()?,
                    sweep,
                })
            })
            .transpose()?;

        let component = raw
            .component
            .map(|c| -> Result<ComponentSection> {
                Ok(match c {
                    RawComponent::Capacitor(d) => ComponentSection::Capacitor {
                        spec: capacitor(&ctx, "component", &RawCapacitor { area: d.area, thickness: d.thickness, plate_thickness: d.plate_thickness, dielectric: d.dielectric, plates: d.plates })?,
                        voltage: q("component.voltage", &d.voltage, Dim::VOLTAGE)?,
                        voltage_change: q("component.voltage_change", &d.voltage_change, Dim::VOLTAGE)?,
                    },
                    RawComponent::Conductor(d) => ComponentSection::Conductor {
                        name: d.name.unwrap_or_else(|| "conductor".into()),
                        spec: conductor(&ctx, "component", &RawConductor { length: d.length, effective_length: d.effective_length, radius: d.radius, material: d.material })?,
                        i2t: q("component.current_squared_integral", &d.current_squared_integral, Dim::CURRENT2_TIME)?,
                    },
                    RawComponent::Photodiode(d) => ComponentSection::Photodiode {
                        spec: photodiode(&ctx, "component", &RawPhotodiode { thickness: d.thickness, radius: d.radius, material: d.material }, q("component.resistance", &d.resistance, Dim::RESISTANCE)?)?,
                        i2t: q("component.current_squared_integral", &d.current_squared_integral, Dim::CURRENT2_TIME)?,
                    },
                    RawComponent::Piezo(d) => ComponentSection::Piezo {
                        spec: piezo(
                            &ctx,
                            "component",
                            &RawPiezo {
                                area: d.area,
                                diameter: d.diameter,
                                thickness: d.thickness,
                                plate_thickness: d.plate_thickness,
                                piezo: d.piezo,
                                plates: d.plates,
                                layers: d.layers,
                            },
                        )?,
                        voltage: q("component.voltage", &d.voltage, Dim::VOLTAGE)?,
                    },
                })
            })
            .transpose()?;

        let detector = raw
            .detector
            .map(|d| -> Result<DetectorScenario> {
                let circuit = circuit(&d.circuit)?;
                Ok(DetectorScenario {
                    capacitor: capacitor(&ctx, "detector.capacitor", &d.capacitor)?,
                    resistor: conductor(&ctx, "detector.resistor", &d.resistor)?,
                    wire: conductor(&ctx, "detector.wire", &d.wire)?,
                    photodiode: photodiode(&ctx, "detector.photodiode", &d.photodiode, circuit.diode_resistance)?,
                    piezo: d.piezo.as_ref().map(|p| piezo(&ctx, "detector.piezo", p)).transpose()?,
                    circuit,
                    model,
                })
            })
            .transpose()?;

        Ok(Scenario { model, temperature, catalog, solid, component, detector })
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Scenario::parse(&text, overrides)
    }

    /// One of the scenarios in [`BUNDLED`].
    pub fn bundled(name: &str, overrides: &Overrides) -> Result<Scenario> {
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::invalid(format!("no bundled scenario '{name}'")))?;
        Scenario::parse(text, overrides)
    }
}
