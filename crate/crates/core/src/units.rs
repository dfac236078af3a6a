//! Unit-suffixed quantities for scenario files and CLI overrides.
//!
//! Bare numbers are SI (m, s, rad, kg, m/s, m/s², rad/s). Strings carry an
//! explicit unit, e.g. `"350 m"`, `"1.695 AU"`, `"90 deg"`, `"15 h"`,
//! `"1 mm/s^2"`. Everything is converted to SI at parse time.

use serde::{de, Deserialize, Deserializer};

use crate::ASTRONOMICAL_UNIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Angle,
    Time,
    Speed,
    Acceleration,
    Mass,
    AngularRate,
    Dimensionless,
}

impl Dimension {
    fn scale(self, unit: &str) -> Option<f64> {
        let u = unit.trim();
        if u.is_empty() {
            return Some(1.0);
        }
        let factor = match self {
            Dimension::Length => match u {
                "m" => 1.0,
                "km" => 1e3,
                "cm" => 1e-2,
                "mm" => 1e-3,
                "AU" | "au" => ASTRONOMICAL_UNIT,
                _ => return None,
            },
            Dimension::Angle => match u {
                "rad" => 1.0,
                "deg" | "°" => std::f64::consts::PI / 180.0,
                _ => return None,
            },
            Dimension::Time => match u {
                "s" => 1.0,
                "min" => 60.0,
                "h" => 3600.0,
                "day" | "days" | "d" => 86400.0,
                _ => return None,
            },
            Dimension::Speed => match u {
                "m/s" => 1.0,
                "cm/s" => 1e-2,
                "mm/s" => 1e-3,
                "km/s" => 1e3,
                _ => return None,
            },
            Dimension::Acceleration => match u {
                "m/s^2" | "m/s2" | "m/s²" => 1.0,
                "mm/s^2" | "mm/s2" | "mm/s²" => 1e-3,
                "cm/s^2" | "cm/s2" | "cm/s²" => 1e-2,
                _ => return None,
            },
            Dimension::Mass => match u {
                "kg" => 1.0,
                "t" => 1e3,
                _ => return None,
            },
            Dimension::AngularRate => match u {
                "rad/s" => 1.0,
                "deg/s" => std::f64::consts::PI / 180.0,
                "deg/h" => std::f64::consts::PI / 180.0 / 3600.0,
                _ => return None,
            },
            Dimension::Dimensionless => match u {
                "" => 1.0,
                "%" => 1e-2,
                _ => return None,
            },
        };
        Some(factor)
    }
}

/// Parses `"<number> [unit]"` into SI. A missing unit means SI already.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let text = text.trim();
    // longest numeric prefix, so "3day" and "5%" need no space
    let split = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()))
        .rev()
        .find_map(|i| text[..i].parse::<f64>().ok().map(|v| (v, &text[i..])))
        .ok_or_else(|| format!("cannot parse number in {text:?}"))?;
    let value = split.0;
    let unit = split.1.trim();
    let scale = dim
        .scale(unit)
        .ok_or_else(|| format!("unit {unit:?} is not a valid {dim:?} unit"))?;
    Ok(value * scale)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Number(f64),
    Text(String),
}

fn with_dim<'de, D: Deserializer<'de>>(d: D, dim: Dimension) -> Result<f64, D::Error> {
    match Raw::deserialize(d)? {
        Raw::Number(v) => Ok(v),
        Raw::Text(s) => parse_quantity(&s, dim).map_err(de::Error::custom),
    }
}

fn with_dim_opt<'de, D: Deserializer<'de>>(d: D, dim: Dimension) -> Result<Option<f64>, D::Error> {
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Number(v)) => Ok(Some(v)),
        Some(Raw::Text(s)) => parse_quantity(&s, dim).map(Some).map_err(de::Error::custom),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawTriple {
    One(Raw),
    Three([Raw; 3]),
}

fn raw_value<E: de::Error>(raw: Raw, dim: Dimension) -> Result<f64, E> {
    match raw {
        Raw::Number(v) => Ok(v),
        Raw::Text(s) => parse_quantity(&s, dim).map_err(E::custom),
    }
}

/// A single quantity (broadcast to all three components) or a 3-array.
fn with_dim_triple<'de, D: Deserializer<'de>>(d: D, dim: Dimension) -> Result<[f64; 3], D::Error> {
    match RawTriple::deserialize(d)? {
        RawTriple::One(r) => raw_value(r, dim).map(|v| [v; 3]),
        RawTriple::Three([x, y, z]) => Ok([raw_value(x, dim)?, raw_value(y, dim)?, raw_value(z, dim)?]),
    }
}

fn with_dim_triple_opt<'de, D: Deserializer<'de>>(d: D, dim: Dimension) -> Result<Option<[f64; 3]>, D::Error> {
    match Option::<RawTriple>::deserialize(d)? {
        None => Ok(None),
        Some(RawTriple::One(r)) => raw_value(r, dim).map(|v| Some([v; 3])),
        Some(RawTriple::Three([x, y, z])) => Ok(Some([raw_value(x, dim)?, raw_value(y, dim)?, raw_value(z, dim)?])),
    }
}

macro_rules! serde_triples {
    ($($name:ident, $opt:ident => $dim:ident;)*) => {
        $(
            pub fn $name<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 3], D::Error> {
                with_dim_triple(d, Dimension::$dim)
            }
            pub fn $opt<'de, D: Deserializer<'de>>(d: D) -> Result<Option<[f64; 3]>, D::Error> {
                with_dim_triple_opt(d, Dimension::$dim)
            }
        )*
    };
}

serde_triples! {
    length3, length3_opt => Length;
    speed3, speed3_opt => Speed;
    accel3, accel3_opt => Acceleration;
    scalar3, scalar3_opt => Dimensionless;
}

macro_rules! serde_dims {
    ($($name:ident, $opt:ident => $dim:ident;)*) => {
        $(
            pub fn $name<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
                with_dim(d, Dimension::$dim)
            }
            pub fn $opt<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
                with_dim_opt(d, Dimension::$dim)
            }
        )*
    };
}

serde_dims! {
    length, length_opt => Length;
    angle, angle_opt => Angle;
    time, time_opt => Time;
    speed, speed_opt => Speed;
    accel, accel_opt => Acceleration;
    mass, mass_opt => Mass;
    angular_rate, angular_rate_opt => AngularRate;
    scalar, scalar_opt => Dimensionless;
}
