//! Superheterodyne receiver chain: LO-biased gain and phase extraction,
//! photodetection, digital IQ down-conversion, sampling, and the equivalent
//! baseband model `y = ρ·e^{jΦ}·x + w` with its noise budget.
//!
//! The RF signal enters as a field envelope in V/cm. The receiver gain `ρ`
//! maps it to photocurrent (A per V/cm) and every noise term is referred
//! back to the input as a field spectral density in V/cm/√Hz.

mod chain;
mod dsp;
mod photodetect;
mod series;
mod superhet;

pub use chain::{simulate_chain, ChainInput, ChainOutput};
pub use dsp::{downconvert, sample, FirLowpass};
pub use photodetect::{photodetect, NoiseBand, PhotodetectMode, Photodetector};
pub use series::{ComplexSeries, RealSeries};
pub use superhet::{
    baseband_model, conventional_baseline, noise_budget, optimal_lo_field, sql_sensitivity, superhet_gain, transmission_vs_field,
    conventional_baseline_with, BasebandModel, ConventionalReference, GainPoint, NoiseBudget, SqlParams, SuperhetConfig,
};
