//! Four-level ladder master equation and EIT/ATS probe spectroscopy.
//!
//! Levels: `|1⟩` ground, `|2⟩` intermediate (probe-coupled), `|3⟩` and
//! `|4⟩` Rydberg states coupled by the coupling laser and the RF field.
//! The decay chain is `|4⟩→|3⟩→|2⟩→|1⟩`, plus a lumped pure-dephasing
//! rate on the Rydberg coherences. All drives are in the rotating frame.

mod master;
mod readout;
mod scheme;
mod spectrum;

pub use master::{liouvillian, propagate, propagate_to_steady_state, steady_state, DensityMatrix4, Liouvillian};
pub use readout::{ats_splitting, ats_splitting_with, field_from_splitting, find_peaks, Peak};
pub use scheme::{LadderScheme, VaporCell};
pub(crate) use spectrum::transmission_at as spectrum_transmission_at;
pub use spectrum::{
    doppler_average, eit_linewidth, probe_susceptibility, transmission_spectrum, uniform_grid, Doppler,
    SpectralTrace,
};
