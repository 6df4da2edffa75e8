use super::wavefunction::trapezoid;
use super::{radial_wavefunction, z_angular_factor, AtomSpecies, GridSpec, RydbergState, WavefunctionTrace};
use crate::{Error, Result};

/// `∫ R_a(r) R_b(r) r³ dr` over the overlap of the two grids, in a₀.
///
/// Traces on the same lattice step are merged point-by-point; otherwise `b`
/// is interpolated onto `a`'s grid.
pub fn radial_overlap_integral(a: &WavefunctionTrace, b: &WavefunctionTrace) -> Result<f64> {
    let lo = a.r_min().max(b.r_min());
    let hi = a.r_max().min(b.r_max());
    if !(hi > lo) {
        return Ok(0.0);
    }
    if (a.step() - b.step()).abs() <= 1e-15 * a.step() {
        let start = a.first_index().max(b.first_index());
        let end = (a.first_index() + a.len()).min(b.first_index() + b.len());
        if end <= start + 1 {
            return Ok(0.0);
        }
        let ia = start - a.first_index();
        let ib = start - b.first_index();
        let grid = &a.radial_grid()[ia..ia + (end - start)];
        let (va, vb) = (a.values(), b.values());
        return Ok(trapezoid(grid, |i| va[ia + i] * vb[ib + i] * grid[i].powi(3)));
    }
    if a.step().max(b.step()) > GridSpec::max_step() {
        return Err(Error::NumericalFailure(
            "grids too coarse to interpolate between different lattices".into(),
        ));
    }
    let idx: Vec<usize> = (0..a.len())
        .filter(|&i| a.radial_grid()[i] >= lo && a.radial_grid()[i] <= hi)
        .collect();
    if idx.len() < 2 {
        return Ok(0.0);
    }
    let grid: Vec<f64> = idx.iter().map(|&i| a.radial_grid()[i]).collect();
    let mut vb = Vec::with_capacity(idx.len());
    for &r in &grid {
        vb.push(b.value_at(r)?);
    }
    Ok(trapezoid(&grid, |k| a.values()[idx[k]] * vb[k] * grid[k].powi(3)))
}

/// Signed radial dipole integral `⟨a| r |b⟩` in e·a₀ (Coulomb approximation).
pub fn radial_matrix_element(species: &AtomSpecies, a: &RydbergState, b: &RydbergState) -> Result<f64> {
    if (a.l() as i64 - b.l() as i64).abs() != 1 {
        return Err(Error::InvalidArgument(format!(
            "radial dipole element needs Δl = ±1 ({} → {})",
            a.label(),
            b.label()
        )));
    }
    let grid = GridSpec::default();
    let wa = radial_wavefunction(species, a, &grid)?;
    let wb = radial_wavefunction(species, b, &grid)?;
    radial_overlap_integral(&wa, &wb)
}

/// Full `⟨a| z |b⟩` in e·a₀: radial integral times the angular factor.
pub fn z_matrix_element(species: &AtomSpecies, a: &RydbergState, b: &RydbergState) -> Result<f64> {
    let ang = z_angular_factor(a.l(), a.j2(), a.m2(), b.l(), b.j2(), b.m2());
    if ang == 0.0 {
        return Ok(0.0);
    }
    Ok(ang * radial_matrix_element(species, a, b)?)
}
