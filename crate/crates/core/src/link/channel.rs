use std::f64::consts::PI;

use nalgebra::{Complex, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::constants::IMPEDANCE_FREE_SPACE;
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Path-loss reference distance d₀, m.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fading {
    Rayleigh,
    None,
}

/// Large-scale link parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub distance_m: f64,
    pub pathloss_exponent: f64,
    pub fading: Fading,
    pub carrier_hz: f64,
    pub tx_power_dbm: Vec<f64>,
    pub seed: u64,
    /// Power gain at d₀ (antenna gains, shadowing margin).
    pub reference_gain: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            distance_m: 200.0,
            pathloss_exponent: 3.8,
            fading: Fading::Rayleigh,
            carrier_hz: 6.945e9,
            tx_power_dbm: (0..=25).map(|k| -10.0 + 2.0 * k as f64).collect(),
            seed: 1,
            reference_gain: 1.0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.distance_m > 0.0) {
            return Err(Error::InvalidArgument(format!("distance {} m must be positive", self.distance_m)));
        }
        if !(2.0..=6.0).contains(&self.pathloss_exponent) {
            return Err(Error::InvalidArgument(format!(
                "path-loss exponent {} outside [2, 6]",
                self.pathloss_exponent
            )));
        }
        if !(self.reference_gain > 0.0) {
            return Err(Error::InvalidArgument("reference gain must be positive".into()));
        }
        if self.tx_power_dbm.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("transmit powers must be finite".into()));
        }
        Ok(())
    }

    /// Peak field amplitude (V/cm) at the receiver for `tx_power_dbm`,
    /// ignoring small-scale fading. An isotropic radiator of power `P` gives
    /// `ℰ² = Z₀·P/(2π·d₀²)` at d₀; path loss scales the power from there.
    pub fn received_field_vcm(&self, tx_power_dbm: f64) -> f64 {
        let field_sq_vm = IMPEDANCE_FREE_SPACE * dbm_to_watts(tx_power_dbm) / (2.0 * PI * REFERENCE_DISTANCE_M.powi(2))
            * pathloss(self.distance_m, self.pathloss_exponent)
            * self.reference_gain;
        field_sq_vm.sqrt() / 100.0
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// `(d/d₀)^(−exponent)` with d₀ = 1 m.
pub fn pathloss(distance_m: f64, exponent: f64) -> f64 {
    (distance_m / REFERENCE_DISTANCE_M).powf(-exponent)
}

/// Unit-variance circularly-symmetric complex Gaussian entries, or ones
/// without fading.
pub fn draw_channel<R: Rng + ?Sized>(fading: Fading, elements: usize, rng: &mut R) -> DVector<C64> {
    match fading {
        Fading::None => DVector::from_element(elements, C64::new(1.0, 0.0)),
        Fading::Rayleigh => DVector::from_fn(elements, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrayLayout {
    Ula,
}

/// Receive array: laser-beam interrogation regions in one vapor cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayGeometry {
    pub elements: usize,
    /// Element spacing in carrier wavelengths.
    pub spacing_wavelengths: f64,
    pub layout: ArrayLayout,
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self {
            elements: 5,
            spacing_wavelengths: 0.5,
            layout: ArrayLayout::Ula,
        }
    }
}

impl ArrayGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.elements == 0 || !(self.spacing_wavelengths > 0.0) {
            return Err(Error::InvalidArgument("array needs at least one element and positive spacing".into()));
        }
        Ok(())
    }
}

/// Far-field ULA response `a_m = exp(j·2π·spacing·m·sin θ)`, m = 0..M−1.
pub fn steering_vector(geometry: &ArrayGeometry, theta: f64) -> DVector<C64> {
    let k = 2.0 * PI * geometry.spacing_wavelengths * theta.sin();
    DVector::from_fn(geometry.elements, |m, _| C64::from_polar(1.0, k * m as f64))
}
