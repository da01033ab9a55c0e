//! Physical constants and unit conversion.
//!
//! Everything inside the crate is Hartree atomic units (ħ = mₑ = e = a₀ = 1).
//! Values entering from configs carry a unit string; values leaving through
//! reports are converted back explicitly.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const HARTREE_MEV: f64 = 27211.386245988;
pub const HARTREE_AJ: f64 = 4.3597447222071;
pub const BOHR_NM: f64 = 0.0529177210903;
pub const HBAR_MEV_FS: f64 = 658.2119569;
/// Atomic unit of time in femtoseconds.
pub const AU_TIME_FS: f64 = HBAR_MEV_FS / HARTREE_MEV;
pub const DALTON_ME: f64 = 1822.888486209;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    Energy,
    Length,
    Time,
    Mass,
    /// √energy / length, the light-matter coupling strength.
    Coupling,
    /// √energy · time, i.e. √mass · length: the photon displacement coordinate.
    PhotonCoordinate,
    Dimensionless,
}

impl Dimension {
    pub fn name(self) -> &'static str {
        match self {
            Dimension::Energy => "energy",
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Mass => "mass",
            Dimension::Coupling => "coupling",
            Dimension::PhotonCoordinate => "photon coordinate",
            Dimension::Dimensionless => "dimensionless",
        }
    }

    /// Unit used for human-facing output.
    pub fn report_unit(self) -> &'static str {
        match self {
            Dimension::Energy => "meV",
            Dimension::Length => "nm",
            Dimension::Time => "fs",
            Dimension::Mass => "me",
            Dimension::Coupling => "meV^(1/2)/nm",
            Dimension::PhotonCoordinate => "sqrt(aJ)*fs",
            Dimension::Dimensionless => "-",
        }
    }
}

fn canonical(unit: &str) -> String {
    unit.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '·' | '⋅' => '*',
            'Å' => 'A',
            'µ' | 'μ' => 'u',
            _ => c,
        })
        .collect::<String>()
        .replace('√', "sqrt")
}

/// Size of one `unit` in atomic units, for quantities of dimension `dim`.
pub fn unit_scale(dim: Dimension, unit: &str) -> Result<f64> {
    let u = canonical(unit);
    let energy = |s: &str| -> Option<f64> {
        match s {
            "Eh" | "hartree" | "au" => Some(1.0),
            "eV" => Some(1000.0 / HARTREE_MEV),
            "meV" => Some(1.0 / HARTREE_MEV),
            "aJ" => Some(1.0 / HARTREE_AJ),
            _ => None,
        }
    };
    let length = |s: &str| -> Option<f64> {
        match s {
            "bohr" | "a0" | "au" => Some(1.0),
            "nm" => Some(1.0 / BOHR_NM),
            "A" | "angstrom" => Some(0.1 / BOHR_NM),
            "pm" => Some(0.001 / BOHR_NM),
            _ => None,
        }
    };
    let time = |s: &str| -> Option<f64> {
        match s {
            "au" => Some(1.0),
            "fs" => Some(1.0 / AU_TIME_FS),
            "ps" => Some(1000.0 / AU_TIME_FS),
            "as" => Some(0.001 / AU_TIME_FS),
            _ => None,
        }
    };
    let scale = match dim {
        Dimension::Energy => energy(&u),
        Dimension::Length => length(&u),
        Dimension::Time => time(&u),
        Dimension::Mass => match u.as_str() {
            "me" | "au" => Some(1.0),
            "u" | "Da" => Some(DALTON_ME),
            _ => None,
        },
        Dimension::Coupling => {
            if u == "au" {
                Some(1.0)
            } else {
                split_sqrt_over(&u).and_then(|(e, l)| Some(energy(e)?.sqrt() / length(l)?))
            }
        }
        Dimension::PhotonCoordinate => {
            if u == "au" {
                Some(1.0)
            } else {
                split_sqrt_times(&u).and_then(|(e, t)| Some(energy(e)?.sqrt() * time(t)?))
            }
        }
        Dimension::Dimensionless => match u.as_str() {
            "" | "1" | "-" => Some(1.0),
            "%" => Some(0.01),
            _ => None,
        },
    };
    scale.ok_or_else(|| Error::UnknownUnit {
        unit: unit.to_string(),
        kind: dim.name().to_string(),
    })
}

/// `meV^(1/2)/nm`, `sqrt(meV)/nm`, `meV^1/2/nm` -> ("meV", "nm").
fn split_sqrt_over(u: &str) -> Option<(&str, &str)> {
    for pre in ["^(1/2)/", "^1/2/", "^0.5/"] {
        if let Some(i) = u.find(pre) {
            return Some((&u[..i], &u[i + pre.len()..]));
        }
    }
    let rest = u.strip_prefix("sqrt(")?;
    let close = rest.find(")/")?;
    Some((&rest[..close], &rest[close + 2..]))
}

/// `sqrt(aJ)*fs`, `aJ^(1/2)*fs` -> ("aJ", "fs").
fn split_sqrt_times(u: &str) -> Option<(&str, &str)> {
    for pre in ["^(1/2)*", "^1/2*", "^0.5*"] {
        if let Some(i) = u.find(pre) {
            return Some((&u[..i], &u[i + pre.len()..]));
        }
    }
    let rest = u.strip_prefix("sqrt(")?;
    let close = rest.find(")*").or_else(|| rest.find(')'))?;
    let tail = rest[close + 1..].trim_start_matches('*');
    Some((&rest[..close], tail))
}

pub fn to_internal(value: f64, dim: Dimension, unit: &str) -> Result<f64> {
    Ok(value * unit_scale(dim, unit)?)
}

pub fn from_internal(value: f64, dim: Dimension, unit: &str) -> Result<f64> {
    Ok(value / unit_scale(dim, unit)?)
}

/// Parse `"10 meV"` / `"-3.5e-2 nm"` into atomic units.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| {
            c.is_whitespace()
                || (c.is_alphabetic() && !(c == 'e' || c == 'E') && i > 0)
                || c == '√'
                || c == 'Å'
        })
        .map(|(i, _)| i)
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::BadQuantity(text.to_string()))?;
    let unit = unit.trim();
    if unit.is_empty() && dim != Dimension::Dimensionless {
        return Err(Error::BadQuantity(format!("`{text}` is missing a {} unit", dim.name())));
    }
    to_internal(value, dim, unit)
}

pub fn mev(e: f64) -> f64 {
    e * HARTREE_MEV
}

pub fn from_mev(e: f64) -> f64 {
    e / HARTREE_MEV
}

pub fn nm(x: f64) -> f64 {
    x * BOHR_NM
}

pub fn from_nm(x: f64) -> f64 {
    x / BOHR_NM
}

pub fn fs(t: f64) -> f64 {
    t * AU_TIME_FS
}

pub fn from_fs(t: f64) -> f64 {
    t / AU_TIME_FS
}

pub fn ps(t: f64) -> f64 {
    t * AU_TIME_FS / 1000.0
}
