use super::{Composition, Constituent, Material};
use crate::error::{Error, Result};
use crate::units::{parse_as, parse_unit, Dim};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

const BUNDLED: &str = include_str!("../../data/catalog.toml");

/// Record fields that carry a unit, with their dimensions. `mass` is the
/// nucleus mass inside composition entries.
const FIELD_DIMS: &[(&str, Dim)] = &[
    ("mass", Dim::MASS),
    ("rho", Dim::DENSITY),
    ("theta_d", Dim::TEMPERATURE),
    ("v_par", Dim::VELOCITY),
    ("v_perp", Dim::VELOCITY),
    ("alpha_l", Dim::INV_TEMPERATURE),
    ("rho_ohm", Dim::RESISTIVITY),
    ("e_e", Dim::PRESSURE),
    ("eps_r", Dim::NONE),
    ("d33", Dim::LENGTH_PER_VOLT),
];

fn field_dim(field: &str) -> Option<Dim> {
    FIELD_DIMS.iter().find(|(f, _)| *f == field).map(|(_, d)| *d)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    units: BTreeMap<String, String>,
    #[serde(default)]
    material: Vec<RawMaterial>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstituent {
    element: String,
    mass: f64,
    fraction: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    name: String,
    composition: Vec<RawConstituent>,
    rho: f64,
    theta_d: f64,
    v_par: Option<f64>,
    v_perp: Option<f64>,
    alpha_l: Option<f64>,
    rho_ohm: Option<f64>,
    e_e: Option<f64>,
    eps_r: Option<f64>,
    d33: Option<f64>,
}

/// An ordered set of materials, loaded from the bundled data file or a
/// user-supplied one.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    materials: Vec<Material>,
}

impl Catalog {
    /// The ten solids of the reference table.
    pub fn bundled() -> Catalog {
        Catalog::parse(BUNDLED).expect("bundled catalog is valid")
    }

    /// Text of the bundled catalog file.
    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Catalog::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| Error::Parse(format!("catalog: {e}")))?;
        let mut scales = BTreeMap::new();
        for (field, unit) in &file.units {
            let expected = field_dim(field).ok_or_else(|| Error::Parse(format!("catalog units: unknown field '{field}'")))?;
            let (scale, d) = parse_unit(unit)?;
            if d != expected {
                return Err(Error::Unit(format!("catalog units: '{field}' declared as '{unit}', expected {expected}")));
            }
            scales.insert(field.as_str(), scale);
        }
        let scale = |field: &'static str, material: &str| -> Result<f64> {
            scales.get(field).copied().ok_or_else(|| {
                Error::Parse(format!("catalog: material '{material}' uses '{field}' but the units header does not declare it"))
            })
        };
        let opt = |v: Option<f64>, field: &'static str, material: &str| -> Result<Option<f64>> {
            match v {
                Some(x) => Ok(Some(x * scale(field, material)?)),
                None => Ok(None),
            }
        };
        let mut materials: Vec<Material> = Vec::new();
        for r in file.material {
            if materials.iter().any(|m| m.name == r.name) {
                return Err(Error::Parse(format!("catalog: duplicate material '{}'", r.name)));
            }
            let ms = scale("mass", &r.name)?;
            let m = Material {
                composition: Composition {
                    entries: r
                        .composition
                        .iter()
                        .map(|c| Constituent { element: c.element.clone(), mass: c.mass * ms, fraction: c.fraction })
                        .collect(),
                },
                rho: r.rho * scale("rho", &r.name)?,
                theta_d: r.theta_d * scale("theta_d", &r.name)?,
                v_par: opt(r.v_par, "v_par", &r.name)?,
                v_perp: opt(r.v_perp, "v_perp", &r.name)?,
                alpha_l: opt(r.alpha_l, "alpha_l", &r.name)?,
                rho_ohm: opt(r.rho_ohm, "rho_ohm", &r.name)?,
                e_e: opt(r.e_e, "e_e", &r.name)?,
                eps_r: opt(r.eps_r, "eps_r", &r.name)?,
                d33: opt(r.d33, "d33", &r.name)?,
                name: r.name,
            };
            m.validate()?;
            materials.push(m);
        }
        Ok(Catalog { materials })
    }

    pub fn get(&self, name: &str) -> Result<&Material> {
        self.materials
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::invalid(format!("material '{name}' not in catalog")))
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn is_empty(&self) -> bool {
        self.materials.is_empty()
    }

    /// Inserts a material, replacing any existing entry of the same name.
    pub fn insert(&mut self, m: Material) -> Result<()> {
        m.validate()?;
        match self.materials.iter_mut().find(|x| x.name == m.name) {
            Some(slot) => *slot = m,
            None => self.materials.push(m),
        }
        Ok(())
    }

    /// Applies a named override. With `base` set, a new material is derived
    /// from the base entry; otherwise the named entry is modified in place.
    pub fn apply_patch(&mut self, name: &str, patch: &MaterialPatch) -> Result<()> {
        let source = patch.base.as_deref().unwrap_or(name);
        let mut m = self.get(source)?.clone();
        m.name = name.to_string();
        patch.apply(&mut m)?;
        self.insert(m)
    }
}

/// Per-scenario material override; every value carries its unit.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialPatch {
    pub base: Option<String>,
    pub rho: Option<String>,
    pub theta_d: Option<String>,
    pub v_par: Option<String>,
    pub v_perp: Option<String>,
    pub alpha_l: Option<String>,
    pub rho_ohm: Option<String>,
    pub e_e: Option<String>,
    pub eps_r: Option<String>,
    pub d33: Option<String>,
}

impl MaterialPatch {
    fn apply(&self, m: &mut Material) -> Result<()> {
        let conv = |field: &'static str, v: &Option<String>| -> Result<Option<f64>> {
            match v {
                Some(text) => parse_as(text, field_dim(field).unwrap_or(Dim::NONE))
                    .map(Some)
                    .map_err(|e| Error::Unit(format!("materials.{}.{field}: {e}", m.name))),
                None => Ok(None),
            }
        };
        if let Some(v) = conv("rho", &self.rho)? {
            m.rho = v;
        }
        if let Some(v) = conv("theta_d", &self.theta_d)? {
            m.theta_d = v;
        }
        let set = |slot: &mut Option<f64>, v: Option<f64>| {
            if v.is_some() {
                *slot = v;
            }
        };
        set(&mut m.v_par, conv("v_par", &self.v_par)?);
        set(&mut m.v_perp, conv("v_perp", &self.v_perp)?);
        set(&mut m.alpha_l, conv("alpha_l", &self.alpha_l)?);
        set(&mut m.rho_ohm, conv("rho_ohm", &self.rho_ohm)?);
        set(&mut m.e_e, conv("e_e", &self.e_e)?);
        set(&mut m.eps_r, conv("eps_r", &self.eps_r)?);
        set(&mut m.d33, conv("d33", &self.d33)?);
        m.validate()
    }
}
