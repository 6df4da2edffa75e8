use std::f64::consts::PI;

use nalgebra::Complex;
use rand::Rng;
use rayon::prelude::*;

use super::{downconvert, photodetect, sample, transmission_vs_field, ComplexSeries, NoiseBand, RealSeries, SuperhetConfig};
use crate::{Error, Result};

type C64 = Complex<f64>;

const TABLE_POINTS: usize = 513;

/// Time-domain run of the receiver chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainInput {
    /// Signal field amplitude at the atoms, V/cm.
    pub signal_field_vcm: f64,
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    /// Enables photodetector shot, electrical and intensity noise.
    pub noise: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    /// Probe power leaving the cell, W.
    pub optical_power: RealSeries,
    pub photocurrent: RealSeries,
    /// Complex envelope of the IF beat (twice the mixer output), A.
    pub baseband: ComplexSeries,
    /// `baseband` decimated to the smallest rate ≥ 2W.
    pub sampled: ComplexSeries,
}

/// Quasi-static transmission lookup on `[lo, hi]`.
struct FieldTable {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl FieldTable {
    fn build(config: &SuperhetConfig, lo: f64, hi: f64) -> Result<Self> {
        if hi <= lo {
            let t = transmission_vs_field(config, lo)?;
            return Ok(Self {
                lo,
                step: 1.0,
                values: vec![t, t],
            });
        }
        let step = (hi - lo) / (TABLE_POINTS - 1) as f64;
        let values = (0..TABLE_POINTS)
            .into_par_iter()
            .map(|k| transmission_vs_field(config, lo + step * k as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { lo, step, values })
    }

    fn eval(&self, field: f64) -> f64 {
        let x = ((field - self.lo) / self.step).clamp(0.0, (self.values.len() - 1) as f64);
        let k = (x.floor() as usize).min(self.values.len() - 2);
        let t = x - k as f64;
        self.values[k] * (1.0 - t) + self.values[k + 1] * t
    }
}

/// Simulates LO + signal → probe transmission → photodetection →
/// IQ down-conversion → sampling.
///
/// The atoms follow the RF envelope `|ℰ_LO + ℰ_s·e^{j(±ω_IF t + φ_s)}|`
/// adiabatically, which holds while the IF is far below the EIT linewidth.
pub fn simulate_chain<R: Rng + ?Sized>(config: &SuperhetConfig, input: &ChainInput, rng: &mut R) -> Result<ChainOutput> {
    config.validate()?;
    let fs = input.sample_rate_hz;
    let f_if = config.if_frequency();
    if !(input.duration_s > 0.0 && fs > 0.0) {
        return Err(Error::InvalidArgument("duration and sample rate must be positive".into()));
    }
    if !(input.signal_field_vcm >= 0.0) {
        return Err(Error::InvalidArgument("signal field must be non-negative".into()));
    }
    let samples = (input.duration_s * fs).round() as usize;
    let (e_lo, e_s) = (config.lo_field_vcm, input.signal_field_vcm);
    let table = FieldTable::build(config, (e_lo - 1.05 * e_s).max(0.0), e_lo + 1.05 * e_s)?;

    let sign = config.beat_sign();
    let phasor_lo = C64::new(e_lo, 0.0);
    let optical: Vec<f64> = (0..samples)
        .map(|n| {
            let cycles = (n as f64 * f_if / fs).fract();
            let theta = sign * 2.0 * PI * cycles + config.signal_phase_rad;
            let envelope = (phasor_lo + C64::from_polar(e_s, theta)).norm();
            config.probe_power_w * table.eval(envelope)
        })
        .collect();
    let noise = input.noise.then_some(NoiseBand { bandwidth_hz: 0.5 * fs });
    let current = photodetect(&optical, config.photodetect_mode, &config.detector, noise, rng)?;
    let photocurrent = RealSeries::new(fs, current);
    let mut baseband = downconvert(&photocurrent, f_if, config.if_bandwidth_hz)?;
    baseband.values.iter_mut().for_each(|v| *v *= 2.0);
    let decimation = (fs / (2.0 * config.if_bandwidth_hz)).floor().max(1.0);
    let sampled = sample(&baseband, fs / decimation)?;
    Ok(ChainOutput {
        optical_power: RealSeries::new(fs, optical),
        photocurrent,
        baseband,
        sampled,
    })
}
