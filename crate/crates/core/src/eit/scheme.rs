use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::atomic::AtomSpecies;
use crate::constants::{ATOMIC_MASS_UNIT, EA0, HBAR, VM_PER_VCM};
use crate::{Error, Result};

const MAX_RATE: f64 = 1e11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VaporCell {
    pub atom_density_m3: f64,
    pub length_m: f64,
    pub temperature_k: f64,
}

impl Default for VaporCell {
    fn default() -> Self {
        Self {
            atom_density_m3: 1.0e15,
            length_m: 0.02,
            temperature_k: 300.0,
        }
    }
}

/// Parameters of the four-level ladder. Rates and Rabi frequencies are
/// angular frequencies (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderScheme {
    pub rabi_probe_rad_s: f64,
    pub rabi_coupling_rad_s: f64,
    pub rabi_rf_rad_s: f64,
    pub detune_probe_rad_s: f64,
    pub detune_coupling_rad_s: f64,
    pub detune_rf_rad_s: f64,
    /// Decay `|2⟩→|1⟩`.
    pub gamma2_rad_s: f64,
    /// Decay `|3⟩→|2⟩`.
    pub gamma3_rad_s: f64,
    /// Decay `|4⟩→|3⟩`.
    pub gamma4_rad_s: f64,
    /// Lumped collisional/transit/laser-linewidth dephasing of `|3⟩`, `|4⟩`.
    pub dephasing_extra_rad_s: f64,
    /// RF transition dipole `d₃₄`, e·a₀.
    pub rf_dipole_ea0: f64,
    /// Probe transition dipole `d₁₂`, e·a₀.
    pub probe_dipole_ea0: f64,
    pub probe_wavelength_nm: f64,
    pub coupling_wavelength_nm: f64,
    pub atomic_mass_u: f64,
    pub cell: VaporCell,
}

impl LadderScheme {
    /// Repo defaults for a Cs 852/510 nm ladder: γ₂ = 2π·5.2 MHz,
    /// Rydberg decay 2π·10 kHz, Ω_P = 2π·1 MHz, Ω_C = 2π·3 MHz, RF off.
    pub fn cs_default(rf_dipole_ea0: f64) -> Self {
        let cs = AtomSpecies::cs133();
        Self::for_species(&cs, rf_dipole_ea0)
    }

    pub fn for_species(species: &AtomSpecies, rf_dipole_ea0: f64) -> Self {
        let mhz = 2.0 * PI * 1e6;
        Self {
            rabi_probe_rad_s: 1.0 * mhz,
            rabi_coupling_rad_s: 3.0 * mhz,
            rabi_rf_rad_s: 0.0,
            detune_probe_rad_s: 0.0,
            detune_coupling_rad_s: 0.0,
            detune_rf_rad_s: 0.0,
            gamma2_rad_s: 5.2 * mhz,
            gamma3_rad_s: 0.01 * mhz,
            gamma4_rad_s: 0.01 * mhz,
            dephasing_extra_rad_s: 0.0,
            rf_dipole_ea0,
            probe_dipole_ea0: species.d2.probe_dipole_ea0,
            probe_wavelength_nm: species.d2.probe_wavelength_nm,
            coupling_wavelength_nm: species.d2.coupling_wavelength_nm,
            atomic_mass_u: species.atomic_mass_u,
            cell: VaporCell::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("rabi_probe", self.rabi_probe_rad_s),
            ("rabi_coupling", self.rabi_coupling_rad_s),
            ("rabi_rf", self.rabi_rf_rad_s),
            ("gamma2", self.gamma2_rad_s),
            ("gamma3", self.gamma3_rad_s),
            ("gamma4", self.gamma4_rad_s),
            ("dephasing_extra", self.dephasing_extra_rad_s),
        ];
        for (name, v) in rates {
            if !(v.is_finite() && (0.0..=MAX_RATE).contains(&v)) {
                return Err(Error::InvalidArgument(format!("{name} = {v} rad/s outside [0, 1e11]")));
            }
        }
        for (name, v) in [
            ("detune_probe", self.detune_probe_rad_s),
            ("detune_coupling", self.detune_coupling_rad_s),
            ("detune_rf", self.detune_rf_rad_s),
        ] {
            if !(v.is_finite() && v.abs() <= MAX_RATE) {
                return Err(Error::InvalidArgument(format!("{name} = {v} rad/s outside ±1e11")));
            }
        }
        if !(self.cell.atom_density_m3 >= 0.0 && self.cell.length_m >= 0.0 && self.cell.temperature_k >= 0.0) {
            return Err(Error::InvalidArgument("vapor cell parameters must be non-negative".into()));
        }
        Ok(())
    }

    /// Rabi frequency `d₃₄·ℰ/ħ` for an RF amplitude in V/cm.
    pub fn rf_rabi_for_field(&self, field_vcm: f64) -> f64 {
        self.rf_dipole_ea0 * EA0 * field_vcm * VM_PER_VCM / HBAR
    }

    /// RF amplitude in V/cm implied by the current `Ω_RF`.
    pub fn rf_field_vcm(&self) -> f64 {
        self.rabi_rf_rad_s * HBAR / (self.rf_dipole_ea0 * EA0 * VM_PER_VCM)
    }

    pub fn with_rf_field(mut self, field_vcm: f64) -> Self {
        self.rabi_rf_rad_s = self.rf_rabi_for_field(field_vcm).abs();
        self
    }

    pub fn with_probe_detuning(mut self, detuning_rad_s: f64) -> Self {
        self.detune_probe_rad_s = detuning_rad_s;
        self
    }

    pub fn probe_wavenumber(&self) -> f64 {
        2.0 * PI / (self.probe_wavelength_nm * 1e-9)
    }

    pub fn coupling_wavenumber(&self) -> f64 {
        2.0 * PI / (self.coupling_wavelength_nm * 1e-9)
    }

    /// 1-D thermal velocity spread `√(k_B T/M)`, m/s.
    pub fn thermal_velocity(&self) -> f64 {
        (crate::constants::BOLTZMANN * self.cell.temperature_k / (self.atomic_mass_u * ATOMIC_MASS_UNIT)).sqrt()
    }

    /// Largest rate or Rabi frequency, used to scale the generator.
    pub(crate) fn rate_scale(&self) -> f64 {
        [
            self.rabi_probe_rad_s,
            self.rabi_coupling_rad_s,
            self.rabi_rf_rad_s,
            self.detune_probe_rad_s.abs(),
            self.detune_coupling_rad_s.abs(),
            self.detune_rf_rad_s.abs(),
            self.gamma2_rad_s,
            self.gamma3_rad_s,
            self.gamma4_rad_s,
            self.dephasing_extra_rad_s,
        ]
        .into_iter()
        .fold(0.0, f64::max)
        .max(1.0)
    }
}
