//! Monte Carlo link experiments on the equivalent baseband model:
//! RAQ-SISO SNR/BER under Rayleigh fading with path loss, centralized
//! RAQ-MIMO achievable rate, and single-source DOA estimation against its
//! Cramér–Rao bound.
//!
//! Every experiment is split into independent trials. Trial `k` of power
//! point `p` draws from its own ChaCha8 stream derived from the master seed,
//! so results do not depend on thread count or scheduling.

mod channel;
mod doa;
mod mimo;
mod modulation;
mod rng;
mod siso;
mod trial;

pub use channel::{
    dbm_to_watts, draw_channel, pathloss, steering_vector, ArrayGeometry, ArrayLayout, ChannelConfig, Fading,
    REFERENCE_DISTANCE_M,
};
pub use doa::{doa_crb, doa_estimate, draw_snapshots, sample_covariance, simulate_doa, DoaPoint, DoaSetup};
pub use mimo::{simulate_mimo_rate, MimoPoint};
pub use modulation::Modulation;
pub use rng::{trial_rng, Experiment};
pub use siso::{rayleigh_ber_per_bit, simulate_siso, siso_trial, SisoPoint};
pub use trial::{Payload, TrialResult};
