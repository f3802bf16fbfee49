//! Quantities with unit suffixes, e.g. `"1 ps"`, `"500 ps^2/km"`, `"10 cm"`.
//! Bare numbers are taken as SI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Time,
    Length,
    /// s/m
    Slowness,
    /// s²/m
    Gvd,
    Power,
    /// rad/s
    AngularFrequency,
    /// 1/(W·m)
    Nonlinearity,
    /// rad/m
    Wavenumber,
}

impl Dim {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dim::Time => &[
                ("s", 1.0),
                ("ms", 1e-3),
                ("us", 1e-6),
                ("ns", 1e-9),
                ("ps", 1e-12),
                ("fs", 1e-15),
            ],
            Dim::Length => &[
                ("m", 1.0),
                ("km", 1e3),
                ("cm", 1e-2),
                ("mm", 1e-3),
                ("um", 1e-6),
            ],
            Dim::Slowness => &[
                ("s/m", 1.0),
                ("ps/m", 1e-12),
                ("ps/km", 1e-15),
                ("ns/m", 1e-9),
                ("fs/mm", 1e-12),
            ],
            Dim::Gvd => &[
                ("s^2/m", 1.0),
                ("s2/m", 1.0),
                ("ps^2/km", 1e-27),
                ("ps2/km", 1e-27),
                ("ps^2/m", 1e-24),
                ("ps2/m", 1e-24),
                ("fs^2/mm", 1e-27),
                ("fs2/mm", 1e-27),
            ],
            Dim::Power => &[("W", 1.0), ("mW", 1e-3), ("kW", 1e3)],
            Dim::AngularFrequency => &[
                ("rad/s", 1.0),
                ("1/s", 1.0),
                ("rad/ps", 1e12),
                ("1/ps", 1e12),
            ],
            Dim::Nonlinearity => &[
                ("1/(W m)", 1.0),
                ("1/(W*m)", 1.0),
                ("/W/m", 1.0),
                ("1/(W km)", 1e-3),
                ("1/(W*km)", 1e-3),
                ("/W/km", 1e-3),
            ],
            Dim::Wavenumber => &[
                ("rad/m", 1.0),
                ("1/m", 1.0),
                ("rad/km", 1e-3),
                ("1/km", 1e-3),
                ("rad/cm", 1e2),
            ],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dim::Time => "time",
            Dim::Length => "length",
            Dim::Slowness => "group slowness",
            Dim::Gvd => "group-velocity dispersion",
            Dim::Power => "power",
            Dim::AngularFrequency => "angular frequency",
            Dim::Nonlinearity => "nonlinearity",
            Dim::Wavenumber => "wavenumber",
        }
    }
}

/// A config value: a bare SI number or a string with a unit suffix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Number(v)
    }
}

impl Quantity {
    /// Value in SI units; `key` names the setting in error messages.
    pub fn si(&self, dim: Dim, key: &str) -> Result<f64> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(s) => parse(s, dim).map_err(|e| Error::Config(format!("`{key}`: {e}"))),
        }
    }
}

/// Parse `"<number> <unit>"`; a missing unit means SI.
pub fn parse(text: &str, dim: Dim) -> std::result::Result<f64, String> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E') && i > 0 && next_is_exponent(t, i)))
        })
        .map(|(i, _)| i)
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("cannot read a number from `{text}`"))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    let squashed: String = unit.split_whitespace().collect::<Vec<_>>().join(" ");
    dim.units()
        .iter()
        .find(|(u, _)| *u == squashed || u.replace(' ', "") == squashed.replace(' ', ""))
        .map(|(_, f)| value * f)
        .ok_or_else(|| {
            let known: Vec<&str> = dim.units().iter().map(|(u, _)| *u).collect();
            format!(
                "unknown {} unit `{unit}` (known: {})",
                dim.name(),
                known.join(", ")
            )
        })
}

fn next_is_exponent(t: &str, i: usize) -> bool {
    t[i + 1..]
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '+')
}
