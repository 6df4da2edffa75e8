//! Simulation core for Rydberg atomic quantum receivers (RAQRs).
//!
//! The crate is layered bottom-up:
//!
//! * [`atomic`]: alkali Rydberg levels from quantum-defect theory, Coulomb
//!   approximation wavefunctions, dipole matrix elements and Stark maps.
//! * [`eit`]: the four-level ladder master equation, EIT/ATS probe spectra,
//!   Doppler averaging and RF field readout.
//! * [`receiver`]: the superheterodyne receiver chain (gain and phase
//!   extraction, photodetection, IQ down-conversion, sampling) and its
//!   equivalent baseband model and noise budget.
//! * [`link`]: Monte Carlo SISO/MIMO link experiments and DOA estimation.

pub mod atomic;
pub mod constants;
pub mod eit;
mod error;
pub mod link;
pub mod receiver;

pub use error::{Error, Result};
