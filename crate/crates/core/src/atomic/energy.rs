use super::{AtomSpecies, RydbergState};
use crate::{Error, Result};

/// Effective principal quantum number `n* = n − δ_{l,j}(n)`.
pub(crate) fn effective_n(species: &AtomSpecies, state: &RydbergState) -> Result<f64> {
    let delta = species.quantum_defect(state.n(), state.l(), state.j2())?;
    let n_star = state.n() as f64 - delta;
    if !(n_star > 0.0) {
        return Err(Error::InvalidState(format!(
            "{} has non-positive effective quantum number {n_star}",
            state.label()
        )));
    }
    Ok(n_star)
}

/// Binding energy `−Ry/n*²` relative to the ionization limit, in THz.
pub fn level_energy(species: &AtomSpecies, state: &RydbergState) -> Result<f64> {
    let n_star = effective_n(species, state)?;
    Ok(-species.rydberg_constant_thz / (n_star * n_star))
}

/// `|E(a) − E(b)|` in GHz.
pub fn transition_frequency(species: &AtomSpecies, a: &RydbergState, b: &RydbergState) -> Result<f64> {
    let ea = level_energy(species, a)?;
    let eb = level_energy(species, b)?;
    Ok((ea - eb).abs() * 1e3)
}
