use rayon::prelude::*;
use serde::Serialize;

use super::{draw_channel, trial_rng, ArrayGeometry, ChannelConfig, Experiment};
use crate::receiver::BasebandModel;
use crate::{Error, Result};

/// Ergodic single-user SIMO rate for two receivers at one power point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MimoPoint {
    pub tx_power_dbm: f64,
    pub snr_raqr_db: f64,
    pub snr_conv_db: f64,
    /// bits/s/Hz
    pub rate_raqr: f64,
    pub rate_conv: f64,
    pub stderr_raqr: f64,
    pub stderr_conv: f64,
    pub gap: f64,
    /// Standard error of the paired per-draw rate difference.
    pub gap_stderr: f64,
}

/// `E_h[log₂(1 + SNR·‖h‖²)]` for both models over `draws` shared fading
/// realizations (common random numbers, so the gap has low variance).
pub fn simulate_mimo_rate(
    channel: &ChannelConfig,
    geometry: &ArrayGeometry,
    model_raqr: &BasebandModel,
    model_conv: &BasebandModel,
    draws: u32,
) -> Result<Vec<MimoPoint>> {
    channel.validate()?;
    geometry.validate()?;
    if draws < 2 {
        return Err(Error::InvalidArgument("need at least two fading draws".into()));
    }
    // the fading draws do not depend on power, so one set serves every point
    let gains: Vec<f64> = (0..draws)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(channel.seed, Experiment::Mimo, 0, t);
            draw_channel(channel.fading, geometry.elements, &mut rng).norm_squared()
        })
        .collect();
    let n = draws as f64;
    let mean_stderr = |values: &[f64]| {
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    };
    let rates = |snr: f64| -> Vec<f64> { gains.iter().map(|g| (1.0 + snr * g).log2()).collect() };
    Ok(channel
        .tx_power_dbm
        .iter()
        .map(|&p| {
            let field = channel.received_field_vcm(p);
            let (snr_r, snr_c) = (model_raqr.snr(field), model_conv.snr(field));
            let (r, c) = (rates(snr_r), rates(snr_c));
            let diff: Vec<f64> = r.iter().zip(&c).map(|(a, b)| a - b).collect();
            let (rate_raqr, stderr_raqr) = mean_stderr(&r);
            let (rate_conv, stderr_conv) = mean_stderr(&c);
            let (gap, gap_stderr) = mean_stderr(&diff);
            MimoPoint {
                tx_power_dbm: p,
                snr_raqr_db: 10.0 * snr_r.log10(),
                snr_conv_db: 10.0 * snr_c.log10(),
                rate_raqr,
                rate_conv,
                stderr_raqr,
                stderr_conv,
                gap,
                gap_stderr,
            }
        })
        .collect())
}
