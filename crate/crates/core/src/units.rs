//! A small unit grammar for scenario and catalog values.
//!
//! A quantity is a number followed by a unit expression such as `mm`, `μs`,
//! `Ω·cm`, `g/cm³`, `MHz/cm3` or `1/K`. Every unit is reduced to SI with a
//! dimension vector, so mismatched units are caught at load time.

use crate::error::{Error, Result};
use std::fmt;

/// Exponents of the SI base dimensions length, mass, time, current, temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dim {
    pub l: i8,
    pub m: i8,
    pub t: i8,
    pub i: i8,
    pub k: i8,
}

const fn dim(l: i8, m: i8, t: i8, i: i8, k: i8) -> Dim {
    Dim { l, m, t, i, k }
}

impl Dim {
    pub const NONE: Dim = dim(0, 0, 0, 0, 0);
    pub const LENGTH: Dim = dim(1, 0, 0, 0, 0);
    pub const AREA: Dim = dim(2, 0, 0, 0, 0);
    pub const VOLUME: Dim = dim(3, 0, 0, 0, 0);
    pub const MASS: Dim = dim(0, 1, 0, 0, 0);
    pub const TIME: Dim = dim(0, 0, 1, 0, 0);
    pub const CURRENT: Dim = dim(0, 0, 0, 1, 0);
    pub const TEMPERATURE: Dim = dim(0, 0, 0, 0, 1);
    pub const DENSITY: Dim = dim(-3, 1, 0, 0, 0);
    pub const VELOCITY: Dim = dim(1, 0, -1, 0, 0);
    pub const VOLTAGE: Dim = dim(2, 1, -3, -1, 0);
    pub const RESISTANCE: Dim = dim(2, 1, -3, -2, 0);
    pub const RESISTIVITY: Dim = dim(3, 1, -3, -2, 0);
    pub const CAPACITANCE: Dim = dim(-2, -1, 4, 2, 0);
    pub const PRESSURE: Dim = dim(-1, 1, -2, 0, 0);
    pub const ENERGY: Dim = dim(2, 1, -2, 0, 0);
    pub const INV_TEMPERATURE: Dim = dim(0, 0, 0, 0, -1);
    pub const LENGTH_PER_VOLT: Dim = dim(-1, -1, 3, 1, 0);
    pub const CURRENT2_TIME: Dim = dim(0, 0, 1, 2, 0);
    /// Rate per volume, e.g. MHz/cm³.
    pub const RATE_DENSITY: Dim = dim(-3, 0, -1, 0, 0);

    fn mul(self, o: Dim) -> Dim {
        dim(self.l + o.l, self.m + o.m, self.t + o.t, self.i + o.i, self.k + o.k)
    }

    fn pow(self, p: i8) -> Dim {
        dim(self.l * p, self.m * p, self.t * p, self.i * p, self.k * p)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Dim::NONE {
            return write!(f, "dimensionless");
        }
        let mut parts = Vec::new();
        for (sym, e) in [("m", self.l), ("kg", self.m), ("s", self.t), ("A", self.i), ("K", self.k)] {
            match e {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{e}")),
            }
        }
        write!(f, "{}", parts.join("·"))
    }
}

/// A parsed value in SI units with its dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dim: Dim,
}

struct Atom {
    sym: &'static str,
    scale: f64,
    dim: Dim,
}

const ATOMS: &[Atom] = &[
    Atom { sym: "m", scale: 1.0, dim: Dim::LENGTH },
    Atom { sym: "g", scale: 1e-3, dim: Dim::MASS },
    Atom { sym: "s", scale: 1.0, dim: Dim::TIME },
    Atom { sym: "A", scale: 1.0, dim: Dim::CURRENT },
    Atom { sym: "K", scale: 1.0, dim: Dim::TEMPERATURE },
    Atom { sym: "V", scale: 1.0, dim: Dim::VOLTAGE },
    Atom { sym: "Ω", scale: 1.0, dim: Dim::RESISTANCE },
    Atom { sym: "Ohm", scale: 1.0, dim: Dim::RESISTANCE },
    Atom { sym: "ohm", scale: 1.0, dim: Dim::RESISTANCE },
    Atom { sym: "F", scale: 1.0, dim: Dim::CAPACITANCE },
    Atom { sym: "Pa", scale: 1.0, dim: Dim::PRESSURE },
    Atom { sym: "Hz", scale: 1.0, dim: dim(0, 0, -1, 0, 0) },
    Atom { sym: "J", scale: 1.0, dim: Dim::ENERGY },
    Atom { sym: "W", scale: 1.0, dim: dim(2, 1, -3, 0, 0) },
    Atom { sym: "C", scale: 1.0, dim: dim(0, 0, 1, 1, 0) },
    Atom { sym: "N", scale: 1.0, dim: dim(1, 1, -2, 0, 0) },
    Atom { sym: "u", scale: crate::constants::AMU, dim: Dim::MASS },
    Atom { sym: "Da", scale: crate::constants::AMU, dim: Dim::MASS },
    Atom { sym: "Å", scale: 1e-10, dim: Dim::LENGTH },
    Atom { sym: "\u{212B}", scale: 1e-10, dim: Dim::LENGTH },
    Atom { sym: "angstrom", scale: 1e-10, dim: Dim::LENGTH },
];

const PREFIXES: &[(&str, f64)] = &[
    ("G", 1e9),
    ("M", 1e6),
    ("k", 1e3),
    ("c", 1e-2),
    ("m", 1e-3),
    ("μ", 1e-6),
    ("µ", 1e-6),
    ("u", 1e-6),
    ("n", 1e-9),
    ("p", 1e-12),
    ("f", 1e-15),
];

fn lookup_atom(s: &str) -> Option<(f64, Dim)> {
    if let Some(a) = ATOMS.iter().find(|a| a.sym == s) {
        return Some((a.scale, a.dim));
    }
    for (p, ps) in PREFIXES {
        if let Some(rest) = s.strip_prefix(p) {
            if let Some(a) = ATOMS.iter().find(|a| a.sym == rest && a.sym != "u" && a.sym != "Da") {
                return Some((ps * a.scale, a.dim));
            }
        }
    }
    None
}

fn superscript_digit(c: char) -> Option<i8> {
    let d = match c {
        '⁰' => 0,
        '¹' => 1,
        '²' => 2,
        '³' => 3,
        '⁴' => 4,
        '⁵' => 5,
        '⁶' => 6,
        '⁷' => 7,
        '⁸' => 8,
        '⁹' => 9,
        _ => return None,
    };
    Some(d)
}

/// Splits a factor like `cm3`, `cm³`, `s^-1` or `K⁻¹` into symbol and exponent.
fn split_exponent(f: &str) -> Result<(&str, i8)> {
    if let Some((sym, e)) = f.split_once('^') {
        let p: i8 = e
            .parse()
            .map_err(|_| Error::Unit(format!("bad exponent in '{f}'")))?;
        return Ok((sym, p));
    }
    let chars: Vec<(usize, char)> = f.char_indices().collect();
    let mut cut = f.len();
    let mut exp_chars = Vec::new();
    for &(idx, c) in chars.iter().rev() {
        if c.is_ascii_digit() || superscript_digit(c).is_some() || c == '⁻' {
            cut = idx;
            exp_chars.push(c);
        } else {
            break;
        }
    }
    if exp_chars.is_empty() || cut == 0 {
        return Ok((f, 1));
    }
    exp_chars.reverse();
    let mut sign = 1i8;
    let mut val: i8 = 0;
    for (n, c) in exp_chars.iter().enumerate() {
        if *c == '⁻' && n == 0 {
            sign = -1;
        } else if let Some(d) = superscript_digit(*c) {
            val = val * 10 + d;
        } else if let Some(d) = c.to_digit(10) {
            val = val * 10 + d as i8;
        } else {
            return Err(Error::Unit(format!("bad exponent in '{f}'")));
        }
    }
    Ok((&f[..cut], sign * val))
}

fn parse_product(s: &str) -> Result<(f64, Dim)> {
    let mut scale = 1.0;
    let mut d = Dim::NONE;
    let factors = s
        .split(|c: char| c == '·' || c == '*' || c == '⋅' || c.is_whitespace())
        .filter(|f| !f.is_empty());
    for f in factors {
        if f == "1" {
            continue;
        }
        let (sym, p) = split_exponent(f)?;
        let (sc, ad) = lookup_atom(sym).ok_or_else(|| Error::Unit(format!("unknown unit '{sym}'")))?;
        scale *= sc.powi(p as i32);
        d = d.mul(ad.pow(p));
    }
    Ok((scale, d))
}

/// Parses a unit expression (no number) into its SI scale and dimension.
pub fn parse_unit(unit: &str) -> Result<(f64, Dim)> {
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok((1.0, Dim::NONE));
    }
    let mut parts = unit.split('/');
    let num = parts.next().unwrap_or("");
    let (mut scale, mut d) = parse_product(num)?;
    for den in parts {
        if den.trim().is_empty() {
            return Err(Error::Unit(format!("empty denominator in '{unit}'")));
        }
        let (s2, d2) = parse_product(den)?;
        scale /= s2;
        d = d.mul(d2.pow(-1));
    }
    Ok((scale, d))
}

fn split_number(text: &str) -> Option<(f64, &str)> {
    let b = text.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let digits_start = i;
    while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
        i += 1;
    }
    if i == digits_start {
        return None;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
    }
    let v: f64 = text[..i].parse().ok()?;
    Some((v, &text[i..]))
}

/// Parses text like `0.2 mm` or `5 Ω·cm` into an SI quantity.
pub fn parse_quantity(text: &str) -> Result<Quantity> {
    let t = text.trim();
    let (v, rest) = split_number(t).ok_or_else(|| Error::Unit(format!("'{text}' does not start with a number")))?;
    let (scale, d) = parse_unit(rest)?;
    let value = v * scale;
    if !value.is_finite() {
        return Err(Error::Unit(format!("'{text}' is not finite")));
    }
    Ok(Quantity { value, dim: d })
}

/// Parses text and checks it has the expected dimension. Dimensioned
/// quantities must carry an explicit unit.
pub fn parse_as(text: &str, expected: Dim) -> Result<f64> {
    let q = parse_quantity(text)?;
    if q.dim != expected {
        if q.dim == Dim::NONE {
            return Err(Error::Unit(format!("'{text}' needs a unit of {expected}")));
        }
        return Err(Error::Unit(format!("'{text}' has dimension {}, expected {expected}", q.dim)));
    }
    Ok(q.value)
}

/// Scale factor of a display unit relative to SI, e.g. `to_si("μs") == 1e-6`.
pub fn to_si(unit: &str) -> Result<f64> {
    Ok(parse_unit(unit)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lengths() {
        assert_relative_eq!(parse_as("1 mm", Dim::LENGTH).unwrap(), 1e-3);
        assert_relative_eq!(parse_as("70 μm", Dim::LENGTH).unwrap(), 70e-6);
        assert_relative_eq!(parse_as("70um", Dim::LENGTH).unwrap(), 70e-6);
        assert_relative_eq!(parse_as("2.5 Å", Dim::LENGTH).unwrap(), 2.5e-10);
        assert_relative_eq!(parse_as("13 cm", Dim::LENGTH).unwrap(), 0.13);
    }

    #[test]
    fn compound() {
        assert_relative_eq!(parse_as("5 Ω·cm", Dim::RESISTIVITY).unwrap(), 0.05);
        assert_relative_eq!(parse_as("1.7e-6 ohm*cm", Dim::RESISTIVITY).unwrap(), 1.7e-8);
        assert_relative_eq!(parse_as("2.7 g/cm³", Dim::DENSITY).unwrap(), 2700.0, max_relative = 1e-12);
        assert_relative_eq!(parse_as("2.7 g/cm3", Dim::DENSITY).unwrap(), 2700.0, max_relative = 1e-12);
        assert_relative_eq!(parse_as("4.3 MHz/cm3", Dim::RATE_DENSITY).unwrap(), 4.3e12, max_relative = 1e-12);
        assert_relative_eq!(parse_as("2.6e-6 1/K", Dim::INV_TEMPERATURE).unwrap(), 2.6e-6);
        assert_relative_eq!(parse_as("2.6e-6 K^-1", Dim::INV_TEMPERATURE).unwrap(), 2.6e-6);
        assert_relative_eq!(parse_as("600 pm/V", Dim::LENGTH_PER_VOLT).unwrap(), 6e-10, max_relative = 1e-12);
        assert_relative_eq!(parse_as("390 pF", Dim::CAPACITANCE).unwrap(), 390e-12, max_relative = 1e-12);
        assert_relative_eq!(parse_as("49 cm²", Dim::AREA).unwrap(), 49e-4, max_relative = 1e-12);
        assert_relative_eq!(parse_as("378 GPa", Dim::PRESSURE).unwrap(), 378e9);
        assert_relative_eq!(parse_as("18 μs·mA²", Dim::CURRENT2_TIME).unwrap(), 18e-12, max_relative = 1e-12);
        assert_relative_eq!(parse_as("26.98 u", Dim::MASS).unwrap(), 26.98 * crate::constants::AMU);
        assert_relative_eq!(parse_as("2 kΩ", Dim::RESISTANCE).unwrap(), 2000.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(parse_as("1 V", Dim::LENGTH).is_err());
        assert!(parse_as("1", Dim::LENGTH).is_err());
        assert!(parse_as("1 furlong", Dim::LENGTH).is_err());
        assert!(parse_as("mm", Dim::LENGTH).is_err());
    }

    #[test]
    fn bare_number_is_dimensionless() {
        assert_eq!(parse_as("9", Dim::NONE).unwrap(), 9.0);
        assert_eq!(parse_as("-1.5e2", Dim::NONE).unwrap(), -150.0);
    }

    #[test]
    fn prefixed_atom_ambiguity() {
        // bare "m" is a metre, "ms" a millisecond, "u" an atomic mass unit
        assert_eq!(parse_quantity("1 m").unwrap().dim, Dim::LENGTH);
        assert_relative_eq!(parse_as("3 ms", Dim::TIME).unwrap(), 3e-3);
        assert_eq!(parse_quantity("1 u").unwrap().dim, Dim::MASS);
        assert_relative_eq!(parse_as("3 us", Dim::TIME).unwrap(), 3e-6);
    }
}
