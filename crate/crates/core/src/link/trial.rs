use nalgebra::Complex;
use serde::{Serialize, Serializer};

/// Outcome of one Monte Carlo trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    /// Fading coefficient(s) used in the trial.
    #[serde(serialize_with = "as_pairs")]
    pub channel_draw: Vec<Complex<f64>>,
    /// Instantaneous SNR, dB.
    pub snr_db: f64,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Payload {
    Bits { sent: u64, errored: u64 },
    Rate { bits_per_s_hz: f64 },
    Doa { theta_true: f64, theta_hat: f64 },
}

fn as_pairs<S: Serializer>(v: &[Complex<f64>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}
