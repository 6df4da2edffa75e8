use std::f64::consts::PI;

use nalgebra::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{PhotodetectMode, Photodetector};
use crate::atomic::{transition_frequency, z_matrix_element, AtomSpecies, RydbergState};
use crate::constants::{BOLTZMANN, EA0, ELEMENTARY_CHARGE, HBAR, VM_PER_VCM};
use crate::eit::{Doppler, LadderScheme};
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Slopes `|∂T/∂ℰ|·ℰ` below this are treated as a stationary bias point.
const MIN_RELATIVE_SLOPE: f64 = 1e-9;

/// Atom-number and timing inputs of the standard quantum limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqlParams {
    pub atom_count: f64,
    pub readout_time_s: f64,
    pub interaction_time_s: f64,
    /// Prefactor in V/cm·s. `None` uses `ħ/d₃₄`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_v_cm_s: Option<f64>,
}

impl Default for SqlParams {
    fn default() -> Self {
        Self {
            atom_count: 5e8,
            readout_time_s: 1e-6,
            interaction_time_s: 1.0,
            calibration_v_cm_s: None,
        }
    }
}

/// Standard-quantum-limit field sensitivity `C/√(N·T_r·T_i)`, V/cm/√Hz.
pub fn sql_sensitivity(atom_count: f64, readout_time_s: f64, interaction_time_s: f64, calibration_v_cm_s: f64) -> Result<f64> {
    for (name, v) in [
        ("atom count", atom_count),
        ("readout time", readout_time_s),
        ("interaction time", interaction_time_s),
        ("calibration constant", calibration_v_cm_s),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(calibration_v_cm_s / (atom_count * readout_time_s * interaction_time_s).sqrt())
}

/// LO-biased superheterodyne receiver.
///
/// The scheme's own `rabi_rf_rad_s` is ignored: the RF drive is the LO at
/// `lo_field_vcm`, and the signal rides on it as a weak beat at
/// `|f_c − f_l|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperhetConfig {
    pub scheme: LadderScheme,
    pub carrier_hz: f64,
    pub lo_frequency_hz: f64,
    pub lo_field_vcm: f64,
    /// Signal phase relative to the LO at the antenna-free atom position.
    pub signal_phase_rad: f64,
    /// Probe power incident on the vapor cell, W.
    pub probe_power_w: f64,
    pub photodetect_mode: PhotodetectMode,
    pub detector: Photodetector,
    pub if_bandwidth_hz: f64,
    /// Largest usable `|f_c − f_l|`.
    pub instantaneous_bandwidth_hz: f64,
    /// Doppler velocity classes; 0 treats the atoms as stationary.
    pub velocity_classes: usize,
    pub sql: SqlParams,
}

impl SuperhetConfig {
    /// Receiver tuned to the RF transition `upper → rf_state` of `species`:
    /// the carrier is the atomic resonance, the LO sits 100 kHz below, and
    /// `d₃₄` is the Coulomb-approximation `z` matrix element.
    pub fn for_transition(species: &AtomSpecies, upper: &RydbergState, rf_state: &RydbergState) -> Result<Self> {
        let d34 = z_matrix_element(species, upper, rf_state)?.abs();
        let carrier_hz = transition_frequency(species, upper, rf_state)? * 1e9;
        let if_hz = 1e5;
        let mut scheme = LadderScheme::for_species(species, d34);
        scheme.detune_rf_rad_s = 0.0;
        Ok(Self {
            scheme,
            carrier_hz,
            lo_frequency_hz: carrier_hz - if_hz,
            lo_field_vcm: 1e-3,
            signal_phase_rad: 0.0,
            probe_power_w: 1e-6,
            photodetect_mode: PhotodetectMode::Diod,
            detector: Photodetector::default(),
            if_bandwidth_hz: 1e4,
            instantaneous_bandwidth_hz: 1e7,
            velocity_classes: 0,
            sql: SqlParams::default(),
        })
    }

    /// Cs 47D5/2 → 48P3/2 (6.95 GHz) vapor-cell receiver in the style of
    /// laboratory superheterodyne demonstrations: room-temperature Doppler
    /// averaging, direct detection, electrical-noise limited.
    pub fn experimental_cs47d() -> Result<Self> {
        let cs = AtomSpecies::cs133();
        let mut c = Self::for_transition(&cs, &RydbergState::new(47, 2, 2.5, 0.5)?, &RydbergState::new(48, 1, 1.5, 0.5)?)?;
        c.scheme.cell.atom_density_m3 = 1e16;
        c.velocity_classes = 2001;
        c.photodetect_mode = PhotodetectMode::Diod;
        c.lo_field_vcm = 1.3e-3;
        Ok(c)
    }

    /// Same transition with Doppler-free atoms and balanced coherent
    /// detection, which is shot-noise limited. Used by the link experiments.
    pub fn link_reference_cs47d() -> Result<Self> {
        let cs = AtomSpecies::cs133();
        let mut c = Self::for_transition(&cs, &RydbergState::new(47, 2, 2.5, 0.5)?, &RydbergState::new(48, 1, 1.5, 0.5)?)?;
        c.velocity_classes = 0;
        c.photodetect_mode = PhotodetectMode::Bcod;
        c.lo_field_vcm = 1.5e-4;
        Ok(c)
    }

    pub fn if_frequency(&self) -> f64 {
        (self.carrier_hz - self.lo_frequency_hz).abs()
    }

    /// +1 when the signal sits above the LO, −1 below; a beat below the LO
    /// runs backwards and conjugates the signal phase.
    pub fn beat_sign(&self) -> f64 {
        if self.carrier_hz >= self.lo_frequency_hz {
            1.0
        } else {
            -1.0
        }
    }

    pub fn doppler(&self) -> Doppler {
        match self.velocity_classes {
            0 => Doppler::Off,
            n => Doppler::On { velocity_classes: n },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        let f_if = self.if_frequency();
        if !(f_if > 0.0) {
            return Err(Error::InvalidArgument("carrier and LO frequencies coincide".into()));
        }
        if f_if > self.instantaneous_bandwidth_hz {
            return Err(Error::OutOfRange(format!(
                "|f_c − f_l| = {f_if} Hz exceeds the instantaneous bandwidth {} Hz",
                self.instantaneous_bandwidth_hz
            )));
        }
        for (name, v) in [
            ("lo_field", self.lo_field_vcm),
            ("probe_power", self.probe_power_w),
            ("pd_responsivity", self.detector.responsivity_a_per_w),
            ("electrical noise", self.detector.electrical_noise_a_rthz),
            ("optical LO power", self.detector.lo_power_w),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !(self.if_bandwidth_hz > 0.0) {
            return Err(Error::InvalidArgument("IF bandwidth must be positive".into()));
        }
        if self.photodetect_mode == PhotodetectMode::Bcod && !(self.detector.lo_power_w > 0.0) {
            return Err(Error::InvalidArgument("balanced detection needs a positive optical LO power".into()));
        }
        Ok(())
    }

    fn sql_calibration(&self) -> f64 {
        self.sql
            .calibration_v_cm_s
            .unwrap_or(HBAR / (self.scheme.rf_dipole_ea0 * EA0) / VM_PER_VCM)
    }
}

/// Quasi-static probe transmission with the total RF envelope at `field_vcm`.
pub fn transmission_vs_field(config: &SuperhetConfig, field_vcm: f64) -> Result<f64> {
    crate::eit::spectrum_transmission_at(&config.scheme.with_rf_field(field_vcm.abs()), config.doppler())
}

/// Small-signal operating point at the LO bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainPoint {
    /// Photocurrent per unit signal field, A/(V/cm).
    pub rho: f64,
    /// IF beat phase relative to the LO reference for the active mode, rad.
    pub phi: f64,
    pub phi_diod: f64,
    pub phi_bcod: f64,
    /// Probe transmission at the bias.
    pub transmission: f64,
    /// `∂T/∂ℰ` at the bias, per V/cm.
    pub transmission_slope: f64,
}

fn wrap_phase(x: f64) -> f64 {
    x.rem_euclid(2.0 * PI)
}

/// Receiver gain `ρ` and phase `Φ` from a central difference of the
/// forward model at the LO field.
///
/// The beat `ℰ_LO + ℰ_s·cos(ω_IF t + φ_s)` modulates the transmission by
/// `∂T/∂ℰ·ℰ_s·cos(ω_IF t + φ_s)`, so `Φ = φ_s` on a rising slope and
/// `φ_s + π` on a falling one (with `φ_s → −φ_s` when `f_c < f_l`). Balanced detection locked to the amplitude
/// quadrature sees the same sign, so both modes report the same phase here.
pub fn superhet_gain(config: &SuperhetConfig) -> Result<GainPoint> {
    config.validate()?;
    let e0 = config.lo_field_vcm;
    let h = if e0 > 0.0 {
        1e-3 * e0
    } else {
        1e-3 * config.scheme.rabi_probe_rad_s.max(2.0 * PI * 1e6) / config.scheme.rf_rabi_for_field(1.0).max(1e-30)
    };
    let t0 = transmission_vs_field(config, e0)?;
    let slope = (transmission_vs_field(config, e0 + h)? - transmission_vs_field(config, e0 - h)?) / (2.0 * h);
    if !(slope.abs() * e0.max(h) > MIN_RELATIVE_SLOPE) {
        return Err(Error::ZeroGainBias { slope });
    }
    let r = config.detector.responsivity_a_per_w;
    let p = config.probe_power_w;
    let rho = match config.photodetect_mode {
        PhotodetectMode::Diod => r * p * slope.abs(),
        PhotodetectMode::Bcod => r * (config.detector.lo_power_w * p / t0).sqrt() * slope.abs(),
    };
    let phase = wrap_phase(config.beat_sign() * config.signal_phase_rad + if slope < 0.0 { PI } else { 0.0 });
    Ok(GainPoint {
        rho,
        phi: phase,
        phi_diod: phase,
        phi_bcod: phase,
        transmission: t0,
        transmission_slope: slope,
    })
}

/// LO field among `candidates` with the largest gain. Stationary bias
/// points are skipped.
pub fn optimal_lo_field(config: &SuperhetConfig, candidates: &[f64]) -> Result<(f64, GainPoint)> {
    let mut best: Option<(f64, GainPoint)> = None;
    for &field in candidates {
        let mut c = *config;
        c.lo_field_vcm = field;
        match superhet_gain(&c) {
            Ok(g) if best.is_none_or(|(_, b)| g.rho > b.rho) => best = Some((field, g)),
            Ok(_) | Err(Error::ZeroGainBias { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::ZeroGainBias { slope: 0.0 })
}

/// Input-referred noise components, V/cm/√Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub sql: f64,
    pub photon_shot: f64,
    pub pd_electrical: f64,
    /// Root-sum-square of the components.
    pub total: f64,
}

impl NoiseBudget {
    pub fn from_components(sql: f64, photon_shot: f64, pd_electrical: f64) -> Self {
        Self {
            sql,
            photon_shot,
            pd_electrical,
            total: (sql * sql + photon_shot * photon_shot + pd_electrical * pd_electrical).sqrt(),
        }
    }
}

fn budget_at(config: &SuperhetConfig, gain: &GainPoint) -> Result<NoiseBudget> {
    let q = ELEMENTARY_CHARGE;
    let r = config.detector.responsivity_a_per_w;
    let detected = config.probe_power_w * gain.transmission;
    let dc_power = match config.photodetect_mode {
        PhotodetectMode::Diod => detected,
        PhotodetectMode::Bcod => detected + config.detector.lo_power_w,
    };
    let shot = (2.0 * q * r * dc_power).sqrt() / gain.rho;
    let electrical = config.detector.electrical_noise_a_rthz / gain.rho;
    let sql = sql_sensitivity(
        config.sql.atom_count,
        config.sql.readout_time_s,
        config.sql.interaction_time_s,
        config.sql_calibration(),
    )?;
    Ok(NoiseBudget::from_components(sql, shot, electrical))
}

pub fn noise_budget(config: &SuperhetConfig) -> Result<NoiseBudget> {
    budget_at(config, &superhet_gain(config)?)
}

/// Equivalent baseband channel `y = ρ·e^{jΦ}·x + w`.
///
/// `x` is the signal field envelope (V/cm); `w` is white with one-sided
/// PSD `noise_psd` over `bandwidth_hz`. `sensitivity = √noise_psd/ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasebandModel {
    pub rho: f64,
    pub phi: f64,
    pub noise_psd: f64,
    pub sensitivity: f64,
    pub bandwidth_hz: f64,
}

impl BasebandModel {
    /// Builds a model from a gain and an input-referred sensitivity.
    pub fn from_sensitivity(rho: f64, phi: f64, sensitivity: f64, bandwidth_hz: f64) -> Result<Self> {
        if !(rho > 0.0 && sensitivity > 0.0 && bandwidth_hz > 0.0) {
            return Err(Error::InvalidArgument("gain, sensitivity and bandwidth must be positive".into()));
        }
        Ok(Self {
            rho,
            phi,
            noise_psd: (sensitivity * rho).powi(2),
            sensitivity,
            bandwidth_hz,
        })
    }

    pub fn gain(&self) -> C64 {
        C64::from_polar(self.rho, self.phi)
    }

    /// Noise power in the model bandwidth.
    pub fn noise_power(&self) -> f64 {
        self.noise_psd * self.bandwidth_hz
    }

    /// SNR for a received field amplitude (V/cm, RMS over the symbol).
    pub fn snr(&self, field_vcm: f64) -> f64 {
        (self.rho * field_vcm).powi(2) / self.noise_power()
    }

    /// Noise-free output.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let g = self.gain();
        x.iter().map(|&v| g * v).collect()
    }

    /// Output with circular complex Gaussian noise of power `noise_power()`.
    pub fn apply_noisy<R: Rng + ?Sized>(&self, x: &[C64], rng: &mut R) -> Vec<C64> {
        let g = self.gain();
        let sigma = (0.5 * self.noise_power()).sqrt();
        x.iter()
            .map(|&v| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                g * v + C64::new(re, im) * sigma
            })
            .collect()
    }
}

pub fn baseband_model(config: &SuperhetConfig) -> Result<BasebandModel> {
    let gain = superhet_gain(config)?;
    let budget = budget_at(config, &gain)?;
    BasebandModel::from_sensitivity(gain.rho, gain.phi, budget.total, config.if_bandwidth_hz)
}

/// Calibration point of the conventional antenna-plus-LNA receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConventionalReference {
    pub temperature_k: f64,
    pub noise_figure_db: f64,
    pub sensitivity_v_cm_rthz: f64,
}

impl Default for ConventionalReference {
    fn default() -> Self {
        Self {
            temperature_k: 290.0,
            noise_figure_db: 0.0,
            sensitivity_v_cm_rthz: 1.5e-9,
        }
    }
}

impl ConventionalReference {
    /// Field-equivalent thermal noise `∝ √(k·T·F)` scaled from the reference.
    pub fn sensitivity(&self, temperature_k: f64, noise_figure_db: f64) -> f64 {
        let f = 10f64.powf(noise_figure_db / 10.0);
        let f_ref = 10f64.powf(self.noise_figure_db / 10.0);
        self.sensitivity_v_cm_rthz * ((BOLTZMANN * temperature_k * f) / (BOLTZMANN * self.temperature_k * f_ref)).sqrt()
    }
}

/// Thermal-noise-limited conventional receiver with `ρ = 1`, `Φ = 0`.
pub fn conventional_baseline(temperature_k: f64, noise_figure_db: f64, bandwidth_hz: f64) -> Result<BasebandModel> {
    conventional_baseline_with(&ConventionalReference::default(), temperature_k, noise_figure_db, bandwidth_hz)
}

pub fn conventional_baseline_with(
    reference: &ConventionalReference,
    temperature_k: f64,
    noise_figure_db: f64,
    bandwidth_hz: f64,
) -> Result<BasebandModel> {
    if !(temperature_k > 0.0 && noise_figure_db >= 0.0) {
        return Err(Error::InvalidArgument("temperature must be positive and noise figure non-negative".into()));
    }
    BasebandModel::from_sensitivity(1.0, 0.0, reference.sensitivity(temperature_k, noise_figure_db), bandwidth_hz)
}
