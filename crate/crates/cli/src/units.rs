//! Unit-tagged config values.
//!
//! A numeric config key carries its unit in its name (`distance_m`,
//! `carrier_hz`, `lo_field_vcm`). Such a key may also be given as a string
//! with an explicit unit, e.g. `distance_m = "0.2 km"` or
//! `carrier_hz = "6.9458 GHz"`. The string is converted to the key's unit;
//! a unit of the wrong dimension is rejected.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    AngularFrequency,
    ElectricField,
    Length,
    Power,
    LogPower,
    Ratio,
    Time,
    Temperature,
    Angle,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Frequency => "frequency",
            Dimension::AngularFrequency => "angular frequency",
            Dimension::ElectricField => "electric field",
            Dimension::Length => "length",
            Dimension::Power => "power",
            Dimension::LogPower => "power in dBm",
            Dimension::Ratio => "ratio in dB",
            Dimension::Time => "time",
            Dimension::Temperature => "temperature",
            Dimension::Angle => "angle",
        };
        f.write_str(s)
    }
}

/// Key suffix → dimension and size of the key's unit in SI.
const SUFFIXES: &[(&str, Dimension, f64)] = &[
    ("_rad_s", Dimension::AngularFrequency, 1.0),
    ("_ghz", Dimension::Frequency, 1e9),
    ("_hz", Dimension::Frequency, 1.0),
    ("_vcm", Dimension::ElectricField, 100.0),
    ("_nm", Dimension::Length, 1e-9),
    ("_m", Dimension::Length, 1.0),
    ("_dbm", Dimension::LogPower, 1.0),
    ("_db", Dimension::Ratio, 1.0),
    ("_w", Dimension::Power, 1.0),
    ("_s", Dimension::Time, 1.0),
    ("_k", Dimension::Temperature, 1.0),
    ("_rad", Dimension::Angle, 1.0),
];

/// Unit symbols without prefix → dimension and SI size.
const BASE_UNITS: &[(&str, Dimension, f64)] = &[
    ("rad/s", Dimension::AngularFrequency, 1.0),
    ("Hz", Dimension::Frequency, 1.0),
    ("V/cm", Dimension::ElectricField, 100.0),
    ("V/m", Dimension::ElectricField, 1.0),
    ("dBm", Dimension::LogPower, 1.0),
    ("dB", Dimension::Ratio, 1.0),
    ("m", Dimension::Length, 1.0),
    ("W", Dimension::Power, 1.0),
    ("s", Dimension::Time, 1.0),
    ("K", Dimension::Temperature, 1.0),
    ("rad", Dimension::Angle, 1.0),
    ("deg", Dimension::Angle, std::f64::consts::PI / 180.0),
];

const PREFIXES: &[(&str, f64)] = &[
    ("p", 1e-12),
    ("n", 1e-9),
    ("u", 1e-6),
    ("µ", 1e-6),
    ("m", 1e-3),
    ("c", 1e-2),
    ("k", 1e3),
    ("M", 1e6),
    ("G", 1e9),
    ("T", 1e12),
];

/// Markers of compound units (`_a_per_w`, `_v_cm_s`, `_a_rthz`). Keys
/// carrying them accept plain numbers only.
const COMPOUND: &[&str] = &["_per_", "_v_cm_", "_rthz"];

/// Dimension and unit size implied by a key name, if it has a unit suffix.
pub fn key_unit(key: &str) -> Option<(Dimension, f64)> {
    if COMPOUND.iter().any(|c| key.contains(c)) {
        return None;
    }
    SUFFIXES
        .iter()
        .find(|(suffix, _, _)| key.ends_with(suffix))
        .map(|&(_, d, scale)| (d, scale))
}

fn parse_unit(unit: &str) -> Option<(Dimension, f64)> {
    if let Some(&(_, d, s)) = BASE_UNITS.iter().find(|(u, _, _)| *u == unit) {
        return Some((d, s));
    }
    for &(prefix, p) in PREFIXES {
        if let Some(rest) = unit.strip_prefix(prefix) {
            if let Some(&(_, d, s)) = BASE_UNITS.iter().find(|(u, _, _)| *u == rest) {
                // logarithmic units take no prefix
                if matches!(d, Dimension::LogPower | Dimension::Ratio) {
                    return None;
                }
                return Some((d, p * s));
            }
        }
    }
    None
}

/// Converts `"<number> <unit>"` to the unit implied by `key`.
pub fn convert(key: &str, text: &str) -> Result<f64, String> {
    let (dim, scale) = key_unit(key).ok_or_else(|| format!("key `{key}` has no unit suffix; give a plain number"))?;
    let text = text.trim();
    let split = text
        .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
        .unwrap_or(text.len());
    let (number, unit) = text.split_at(split);
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("key `{key}`: cannot read a number from `{text}`"))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    let (got, size) = parse_unit(unit).ok_or_else(|| format!("key `{key}`: unknown unit `{unit}`"))?;
    if got != dim {
        return Err(format!("key `{key}` expects {dim}, but `{text}` is {got}"));
    }
    Ok(value * size / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converts_within_dimension() {
        assert_eq!(convert("distance_m", "0.2 km").unwrap(), 200.0);
        assert!((convert("carrier_hz", "6.9458 GHz").unwrap() - 6.9458e9).abs() < 1e-3);
        assert!((convert("lo_field_vcm", "150 uV/cm").unwrap() - 1.5e-4).abs() < 1e-18);
        assert!((convert("lo_field_vcm", "1 V/m").unwrap() - 0.01).abs() < 1e-15);
        assert!((convert("probe_wavelength_nm", "852 nm").unwrap() - 852.0).abs() < 1e-9);
        assert_eq!(convert("noise_figure_db", "3 dB").unwrap(), 3.0);
        assert_eq!(convert("distance_m", "7").unwrap(), 7.0);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let e = convert("distance_m", "5 GHz").unwrap_err();
        assert!(e.contains("distance_m") && e.contains("length"));
        assert!(convert("tx_dbm", "3 mW").is_err());
        assert!(convert("seed", "3 s").is_err());
        assert!(convert("distance_m", "3 furlong").is_err());
        assert!(convert("noise_figure_db", "3 kdB").is_err());
    }

    #[test]
    fn suffix_order_prefers_longest_match() {
        assert_eq!(key_unit("rabi_probe_rad_s").unwrap().0, Dimension::AngularFrequency);
        assert_eq!(key_unit("readout_time_s").unwrap().0, Dimension::Time);
        assert_eq!(key_unit("energy_window_ghz").unwrap(), (Dimension::Frequency, 1e9));
        assert_eq!(key_unit("theta_rad").unwrap().0, Dimension::Angle);
        assert!(key_unit("elements").is_none());
        assert!(key_unit("responsivity_a_per_w").is_none());
        assert!(key_unit("calibration_v_cm_s").is_none());
        assert!(key_unit("electrical_noise_a_rthz").is_none());
    }
}
