use serde::{Deserialize, Serialize};

use super::AtomSpecies;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingProperty {
    OrbitalRadius,
    BindingEnergy,
    LevelSpacing,
    Lifetime,
    Polarizability,
    DipoleMoment,
}

impl ScalingProperty {
    pub const ALL: [ScalingProperty; 6] = [
        ScalingProperty::OrbitalRadius,
        ScalingProperty::BindingEnergy,
        ScalingProperty::LevelSpacing,
        ScalingProperty::Lifetime,
        ScalingProperty::Polarizability,
        ScalingProperty::DipoleMoment,
    ];

    /// Power `p` of the `(n*)^p` law.
    pub fn exponent(self) -> i32 {
        match self {
            ScalingProperty::OrbitalRadius => 2,
            ScalingProperty::BindingEnergy => -2,
            ScalingProperty::LevelSpacing => -3,
            ScalingProperty::Lifetime => 3,
            ScalingProperty::Polarizability => 7,
            ScalingProperty::DipoleMoment => 2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            ScalingProperty::OrbitalRadius => "a0",
            ScalingProperty::BindingEnergy | ScalingProperty::LevelSpacing => "GHz",
            ScalingProperty::Lifetime => "ns",
            ScalingProperty::Polarizability => "MHz/(V/cm)^2",
            ScalingProperty::DipoleMoment => "e*a0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub value: f64,
    pub unit: &'static str,
}

/// Scaling-law estimate at effective quantum number `n_star`.
pub fn scaling_property_at(species: &AtomSpecies, n_star: f64, property: ScalingProperty) -> ScaledValue {
    let ry_ghz = species.rydberg_constant_thz * 1e3;
    let c = match property {
        ScalingProperty::OrbitalRadius => species.scaling.orbital_radius_a0,
        ScalingProperty::BindingEnergy => ry_ghz,
        ScalingProperty::LevelSpacing => 2.0 * ry_ghz,
        ScalingProperty::Lifetime => species.scaling.lifetime_ns,
        ScalingProperty::Polarizability => species.scaling.polarizability_mhz_per_vcm2,
        ScalingProperty::DipoleMoment => species.scaling.dipole_moment_ea0,
    };
    ScaledValue {
        value: c * n_star.powi(property.exponent()),
        unit: property.unit(),
    }
}

/// Scaling-law estimate at principal quantum number `n`, evaluated on the
/// defect-free high-l series (`n* = n`).
pub fn scaling_property(species: &AtomSpecies, n: u32, property: ScalingProperty) -> Result<ScaledValue> {
    if n < 10 {
        return Err(Error::InvalidArgument(format!("scaling laws need n >= 10, got {n}")));
    }
    Ok(scaling_property_at(species, n as f64, property))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::BOHR_RADIUS;

    #[test]
    fn exact_power_laws() {
        let cs = AtomSpecies::cs133();
        let ratio = |p, a, b| {
            scaling_property(&cs, a, p).unwrap().value / scaling_property(&cs, b, p).unwrap().value
        };
        assert_eq!(ratio(ScalingProperty::BindingEnergy, 40, 20), 0.25);
        assert!((ratio(ScalingProperty::Polarizability, 60, 30) - 128.0).abs() < 1e-9);
        assert!((ratio(ScalingProperty::LevelSpacing, 20, 10) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn orbital_radius_near_micron_at_n100() {
        let cs = AtomSpecies::cs133();
        let r = scaling_property_at(&cs, 100.0, ScalingProperty::OrbitalRadius);
        let metres = r.value * BOHR_RADIUS;
        assert!(metres > 0.3e-6 && metres < 3e-6, "{metres}");
    }

    #[test]
    fn low_n_rejected() {
        let cs = AtomSpecies::cs133();
        assert!(scaling_property(&cs, 9, ScalingProperty::Lifetime).is_err());
    }
}
