use nalgebra::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::{draw_channel, trial_rng, ChannelConfig, Experiment, Modulation, Payload, TrialResult};
use crate::receiver::BasebandModel;
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Symbols sharing one fading draw inside a trial.
const SYMBOLS_PER_TRIAL: usize = 16;

/// One transmit-power point of a SISO BER curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SisoPoint {
    pub tx_power_dbm: f64,
    /// Average received SNR `ρ²ℰ²E|h|²/(N₀W)`, dB.
    pub snr_db: f64,
    pub ber: f64,
    /// Standard error of `ber` from the spread of per-trial error rates.
    pub ber_stderr: f64,
    pub bits: u64,
    pub errors: u64,
}

/// Average per-bit BER of BPSK/Gray-QPSK over Rayleigh fading with mean
/// per-bit SNR `gamma_b`: `½(1 − √(γ/(1+γ)))`.
pub fn rayleigh_ber_per_bit(gamma_b: f64) -> f64 {
    0.5 * (1.0 - (gamma_b / (1.0 + gamma_b)).sqrt())
}

/// One block-fading trial: `y = ρe^{jΦ}·h·ℰ·x + w`, coherent detection
/// with genie knowledge of `ρ`, `Φ` and `h`.
pub fn siso_trial<R: Rng + ?Sized>(
    channel: &ChannelConfig,
    model: &BasebandModel,
    modulation: Modulation,
    field_vcm: f64,
    symbols: usize,
    rng: &mut R,
) -> TrialResult {
    let h = draw_channel(channel.fading, 1, rng)[0];
    let gain = model.gain() * h * field_vcm;
    let sigma = (0.5 * model.noise_power()).sqrt();
    let bps = modulation.bits_per_symbol();
    let mut bits = vec![0u8; bps];
    let mut decided = vec![0u8; bps];
    let mut errored = 0u64;
    for _ in 0..symbols {
        let word: u32 = rng.random();
        for (k, b) in bits.iter_mut().enumerate() {
            *b = ((word >> k) & 1) as u8;
        }
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        let y = gain * modulation.map(&bits) + C64::new(re, im) * sigma;
        modulation.demap(y / gain, &mut decided);
        errored += bits.iter().zip(&decided).filter(|(a, b)| a != b).count() as u64;
    }
    TrialResult {
        channel_draw: vec![h],
        snr_db: 10.0 * (model.snr(field_vcm) * h.norm_sqr()).log10(),
        payload: Payload::Bits {
            sent: (symbols * bps) as u64,
            errored,
        },
    }
}

/// BER versus transmit power over the channel's power grid.
pub fn simulate_siso(
    channel: &ChannelConfig,
    model: &BasebandModel,
    modulation: Modulation,
    bits_per_point: u64,
) -> Result<Vec<SisoPoint>> {
    channel.validate()?;
    if bits_per_point == 0 {
        return Err(Error::InvalidArgument("bits_per_point must be positive".into()));
    }
    let bps = modulation.bits_per_symbol() as u64;
    let trials = bits_per_point.div_ceil(bps * SYMBOLS_PER_TRIAL as u64) as u32;
    channel
        .tx_power_dbm
        .iter()
        .enumerate()
        .map(|(point, &p_dbm)| {
            let field = channel.received_field_vcm(p_dbm);
            let results: Vec<(u64, u64)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(channel.seed, Experiment::Siso, point as u32, t);
                    match siso_trial(channel, model, modulation, field, SYMBOLS_PER_TRIAL, &mut rng).payload {
                        Payload::Bits { sent, errored } => (sent, errored),
                        _ => unreachable!("SISO trials carry bit counts"),
                    }
                })
                .collect();
            let bits: u64 = results.iter().map(|r| r.0).sum();
            let errors: u64 = results.iter().map(|r| r.1).sum();
            let ber = errors as f64 / bits as f64;
            let n = results.len() as f64;
            let var = results
                .iter()
                .map(|&(s, e)| (e as f64 / s as f64 - ber).powi(2))
                .sum::<f64>()
                / (n - 1.0).max(1.0);
            Ok(SisoPoint {
                tx_power_dbm: p_dbm,
                snr_db: 10.0 * model.snr(field).log10(),
                ber,
                ber_stderr: (var / n).sqrt(),
                bits,
                errors,
            })
        })
        .collect()
}
