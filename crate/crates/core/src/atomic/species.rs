use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{ATOMIC_MASS_UNIT, SPEED_OF_LIGHT};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpeciesName {
    Cs133,
    Rb87,
    Rb85,
}

impl fmt::Display for SpeciesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpeciesName::Cs133 => "Cs133",
            SpeciesName::Rb87 => "Rb87",
            SpeciesName::Rb85 => "Rb85",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SpeciesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cs133" | "cs" => Ok(SpeciesName::Cs133),
            "rb87" => Ok(SpeciesName::Rb87),
            "rb85" => Ok(SpeciesName::Rb85),
            other => Err(Error::InvalidArgument(format!("unknown species '{other}'"))),
        }
    }
}

/// Probe (D2) and coupling line data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct D2Line {
    pub probe_wavelength_nm: f64,
    pub coupling_wavelength_nm: f64,
    pub linewidth_mhz: f64,
    pub probe_dipole_ea0: f64,
}

/// Rydberg–Ritz series for one `(l, j)` channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumDefect {
    pub l: u32,
    pub j: f64,
    pub series: Vec<f64>,
}

impl QuantumDefect {
    /// δ(n) = δ0 + δ2/(n−δ0)² + δ4/(n−δ0)⁴ + …
    pub fn at(&self, n: u32) -> f64 {
        let Some(&d0) = self.series.first() else {
            return 0.0;
        };
        let inv = 1.0 / (n as f64 - d0).powi(2);
        let mut term = 1.0;
        let mut delta = 0.0;
        for c in &self.series {
            delta += c * term;
            term *= inv;
        }
        delta
    }
}

/// Prefactors of the `C·(n*)^p` scaling laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConstants {
    pub orbital_radius_a0: f64,
    pub dipole_moment_ea0: f64,
    pub lifetime_ns: f64,
    pub polarizability_mhz_per_vcm2: f64,
}

/// Atomic data for one alkali species.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpecies {
    pub name: SpeciesName,
    pub atomic_mass_u: f64,
    pub ionization_energy_thz: f64,
    /// Reduced-mass Rydberg constant.
    pub rydberg_constant_thz: f64,
    pub d2: D2Line,
    pub defects: Vec<QuantumDefect>,
    pub scaling: ScalingConstants,
}

const CS133: &str = include_str!("../../data/species/cs133.toml");
const RB87: &str = include_str!("../../data/species/rb87.toml");
const RB85: &str = include_str!("../../data/species/rb85.toml");

impl AtomSpecies {
    pub fn cs133() -> Self {
        Self::from_toml_str(CS133).expect("bundled Cs133 data")
    }

    pub fn rb87() -> Self {
        Self::from_toml_str(RB87).expect("bundled Rb87 data")
    }

    pub fn rb85() -> Self {
        Self::from_toml_str(RB85).expect("bundled Rb85 data")
    }

    pub fn builtin(name: SpeciesName) -> Self {
        match name {
            SpeciesName::Cs133 => Self::cs133(),
            SpeciesName::Rb87 => Self::rb87(),
            SpeciesName::Rb85 => Self::rb85(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let species: AtomSpecies = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        species.validate()?;
        Ok(species)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("species serializes")
    }

    fn validate(&self) -> Result<()> {
        if !(self.ionization_energy_thz > 0.0) || !(self.rydberg_constant_thz > 0.0) {
            return Err(Error::Parse("energies must be positive".into()));
        }
        if !(self.atomic_mass_u > 0.0) {
            return Err(Error::Parse("atomic mass must be positive".into()));
        }
        for qd in &self.defects {
            let j2 = qd.j * 2.0;
            let valid_j = (j2 - j2.round()).abs() < 1e-9
                && (j2.round() as i64 == 2 * qd.l as i64 + 1 || j2.round() as i64 == 2 * qd.l as i64 - 1);
            if !valid_j {
                return Err(Error::Parse(format!("invalid j = {} for l = {}", qd.j, qd.l)));
            }
            if qd.series.is_empty() {
                return Err(Error::Parse(format!("empty defect series for l = {}", qd.l)));
            }
        }
        Ok(())
    }

    /// The same species with every quantum defect set to zero (hydrogenic limit).
    pub fn without_defects(&self) -> Self {
        let mut out = self.clone();
        for qd in &mut out.defects {
            qd.series.iter_mut().for_each(|c| *c = 0.0);
        }
        out
    }

    pub fn is_defect_free(&self) -> bool {
        self.defects.iter().all(|qd| qd.series.iter().all(|&c| c == 0.0))
    }

    /// Quantum defect of level `(n, l, j)`, with `j2 = 2j`. Zero for `l ≥ 4`.
    pub fn quantum_defect(&self, n: u32, l: u32, j2: u32) -> Result<f64> {
        if let Some(qd) = self
            .defects
            .iter()
            .find(|qd| qd.l == l && (qd.j * 2.0).round() as u32 == j2)
        {
            return Ok(qd.at(n));
        }
        // j-averaged fallback when only one fine-structure series exists
        let same_l: Vec<&QuantumDefect> = self.defects.iter().filter(|qd| qd.l == l).collect();
        if !same_l.is_empty() {
            let sum: f64 = same_l.iter().map(|qd| qd.at(n)).sum();
            return Ok(sum / same_l.len() as f64);
        }
        if l >= 4 {
            return Ok(0.0);
        }
        Err(Error::MissingData(format!(
            "{} has no defect series for l = {l}, j = {}/2",
            self.name, j2
        )))
    }

    pub fn atomic_mass_kg(&self) -> f64 {
        self.atomic_mass_u * ATOMIC_MASS_UNIT
    }

    /// Probe wave number 2π/λ_P in rad/m.
    pub fn probe_wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.d2.probe_wavelength_nm * 1e-9)
    }

    pub fn coupling_wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.d2.coupling_wavelength_nm * 1e-9)
    }

    /// Ionization energy as a wavenumber, cm⁻¹.
    pub fn ionization_energy_cm(&self) -> f64 {
        self.ionization_energy_thz * 1e12 / (SPEED_OF_LIGHT * 100.0)
    }
}
