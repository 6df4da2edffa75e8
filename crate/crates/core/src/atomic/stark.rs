//! DC Stark maps by direct diagonalization in a fixed-`m_j` basis.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::energy::effective_n;
use super::{
    level_energy, radial_overlap_integral, radial_wavefunction, z_angular_factor, AtomSpecies, GridSpec,
    RydbergState, WavefunctionTrace,
};
use crate::constants::EA0_VCM_TO_GHZ;
use crate::{Error, Result};

/// Basis truncation around a center state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarkBasisSpec {
    /// Half-width of the energy window around the center level, GHz.
    pub energy_window_ghz: f64,
    /// Largest `|n − n_center|` included.
    pub max_delta_n: u32,
}

impl StarkBasisSpec {
    /// Window of one local level spacing `2Ry/n*³`, `|Δn| ≤ 4`.
    pub fn around(species: &AtomSpecies, center: &RydbergState) -> Result<Self> {
        let n_star = effective_n(species, center)?;
        Ok(Self {
            energy_window_ghz: 2.0 * species.rydberg_constant_thz * 1e3 / n_star.powi(3),
            max_delta_n: 4,
        })
    }
}

/// `H(ℰ) = H₀ + ℰ·D` in GHz, with `D` the `z` dipole matrix of a fixed-`m` block.
#[derive(Debug, Clone)]
pub struct StarkHamiltonian {
    basis: Vec<RydbergState>,
    energies_ghz: Vec<f64>,
    /// `⟨i| z |j⟩` in e·a₀.
    dipole: DMatrix<f64>,
}

impl StarkHamiltonian {
    /// Assembles the basis for `center` and all dipole couplings within it.
    pub fn build(species: &AtomSpecies, center: &RydbergState, spec: &StarkBasisSpec) -> Result<Self> {
        let e_center = level_energy(species, center)? * 1e3;
        let n_lo = center.n().saturating_sub(spec.max_delta_n).max(1);
        let n_hi = center.n() + spec.max_delta_n;
        let m2 = center.m2();
        let mut basis = Vec::new();
        let mut energies = Vec::new();
        for n in n_lo..=n_hi {
            for l in 0..n {
                let mut j2s = vec![2 * l + 1];
                if l > 0 {
                    j2s.insert(0, 2 * l - 1);
                }
                for j2 in j2s {
                    if m2.unsigned_abs() > j2 {
                        continue;
                    }
                    let st = RydbergState::from_doubled(n, l, j2, m2)?;
                    let e = match level_energy(species, &st) {
                        Ok(e) => e * 1e3,
                        Err(Error::InvalidState(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    if (e - e_center).abs() <= spec.energy_window_ghz {
                        basis.push(st);
                        energies.push(e);
                    }
                }
            }
        }
        if basis.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "no states within ±{} GHz of {}",
                spec.energy_window_ghz,
                center.label()
            )));
        }

        let grid = GridSpec::default();
        let traces: Vec<WavefunctionTrace> = basis
            .par_iter()
            .map(|st| radial_wavefunction(species, st, &grid))
            .collect::<Result<_>>()?;

        let dim = basis.len();
        let pairs: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                let (a, b) = (&basis[i], &basis[j]);
                (a.l() as i64 - b.l() as i64).abs() == 1
            })
            .collect();
        let elements: Vec<(usize, usize, f64)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (a, b) = (&basis[i], &basis[j]);
                let ang = z_angular_factor(a.l(), a.j2(), a.m2(), b.l(), b.j2(), b.m2());
                if ang == 0.0 {
                    return Ok((i, j, 0.0));
                }
                Ok((i, j, ang * radial_overlap_integral(&traces[i], &traces[j])?))
            })
            .collect::<Result<_>>()?;
        let mut dipole = DMatrix::zeros(dim, dim);
        for (i, j, d) in elements {
            dipole[(i, j)] = d;
            dipole[(j, i)] = d;
        }
        Ok(Self {
            basis,
            energies_ghz: energies,
            dipole,
        })
    }

    /// Hamiltonian from explicit parts (toy models, tests).
    pub fn from_parts(basis: Vec<RydbergState>, energies_ghz: Vec<f64>, dipole: DMatrix<f64>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 || energies_ghz.len() != dim || dipole.nrows() != dim || dipole.ncols() != dim {
            return Err(Error::InvalidArgument("inconsistent Stark Hamiltonian parts".into()));
        }
        if dipole != dipole.transpose() {
            return Err(Error::InvalidArgument("dipole matrix must be symmetric".into()));
        }
        Ok(Self {
            basis,
            energies_ghz,
            dipole,
        })
    }

    pub fn basis(&self) -> &[RydbergState] {
        &self.basis
    }

    pub fn energies_ghz(&self) -> &[f64] {
        &self.energies_ghz
    }

    pub fn dipole(&self) -> &DMatrix<f64> {
        &self.dipole
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, state: &RydbergState) -> Option<usize> {
        self.basis.iter().position(|s| s == state)
    }

    /// `H(ℰ)` in GHz for a field in V/cm. Real symmetric by construction.
    pub fn matrix(&self, field_vcm: f64) -> DMatrix<f64> {
        let mut h = &self.dipole * (field_vcm * EA0_VCM_TO_GHZ);
        for (i, e) in self.energies_ghz.iter().enumerate() {
            h[(i, i)] += e;
        }
        h
    }

    /// Eigenvalues (ascending) and matching eigenvector columns.
    pub fn diagonalize(&self, field_vcm: f64) -> (Vec<f64>, DMatrix<f64>) {
        let eig = SymmetricEigen::new(self.matrix(field_vcm));
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Second-order perturbation sum `α = 2 Σ_k |D_ck|²/(E_c − E_k)`, MHz/(V/cm)².
    pub fn perturbative_polarizability(&self, index: usize) -> f64 {
        let ec = self.energies_ghz[index];
        let mut alpha = 0.0;
        for k in 0..self.dim() {
            let d = self.dipole[(index, k)] * EA0_VCM_TO_GHZ;
            if k == index || d == 0.0 {
                continue;
            }
            alpha += 2.0 * d * d / (ec - self.energies_ghz[k]);
        }
        alpha * 1e3
    }

    /// Smallest energy gap between basis state `index` and any state it couples to, GHz.
    fn nearest_coupled_gap(&self, index: usize) -> Option<(f64, f64)> {
        let ec = self.energies_ghz[index];
        let mut best: Option<(f64, f64)> = None;
        for k in 0..self.dim() {
            let d = self.dipole[(index, k)].abs();
            if k == index || d == 0.0 {
                continue;
            }
            let gap = (ec - self.energies_ghz[k]).abs();
            if best.is_none_or(|(g, _)| gap < g) {
                best = Some((gap, d));
            }
        }
        best
    }
}

/// Eigenenergy traces of a Stark Hamiltonian over an ascending field grid.
#[derive(Debug, Clone)]
pub struct StarkMap {
    pub field_grid: Vec<f64>,
    pub basis: Vec<RydbergState>,
    pub center: RydbergState,
    pub energy_window_ghz: f64,
    pub max_delta_n: u32,
    /// `eigen_traces[t][i]`: energy (GHz) of trace `t` at `field_grid[i]`.
    pub eigen_traces: Vec<Vec<f64>>,
    /// Sorted eigenvalues per field, for gap analysis.
    pub sorted_levels: Vec<Vec<f64>>,
    /// Trace that starts on the center state at zero field.
    pub center_trace: usize,
    /// Basis index each trace starts on at zero field.
    pub trace_origin: Vec<usize>,
    pub unperturbed_ghz: Vec<f64>,
}

/// An interior minimum of the gap between adjacent levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiCrossing {
    /// Index of the lower level in the sorted spectrum.
    pub lower: usize,
    pub field_vcm: f64,
    pub gap_ghz: f64,
}

/// Least-squares fit `y = a·x` through the origin; returns `(a, R²)`.
fn fit_through_origin(x: &[f64], y: &[f64]) -> (f64, f64) {
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let a = sxy / sxx;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_res: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - a * xi).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|yi| (yi - mean).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (a, r2)
}

impl StarkMap {
    /// Builds the map from a prepared Hamiltonian, following traces by
    /// maximum eigenvector overlap between neighbouring field points.
    pub fn from_hamiltonian(
        hamiltonian: &StarkHamiltonian,
        center: RydbergState,
        spec: &StarkBasisSpec,
        field_grid: &[f64],
    ) -> Result<Self> {
        if field_grid.is_empty() || field_grid[0] != 0.0 {
            return Err(Error::InvalidArgument("field grid must start at 0 V/cm".into()));
        }
        if field_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("field grid must be strictly ascending".into()));
        }
        let center_index = hamiltonian
            .index_of(&center)
            .ok_or_else(|| Error::InvalidArgument(format!("{} not in basis", center)))?;
        let spectra: Vec<(Vec<f64>, DMatrix<f64>)> =
            field_grid.par_iter().map(|&f| hamiltonian.diagonalize(f)).collect();

        let dim = hamiltonian.dim();
        // assignment[t] = eigen-column of trace t at the current field
        let mut assignment: Vec<usize> = (0..dim).collect();
        let mut traces: Vec<Vec<f64>> = (0..dim).map(|t| vec![spectra[0].0[t]]).collect();
        for step in 1..spectra.len() {
            let prev = &spectra[step - 1].1;
            let cur = &spectra[step].1;
            let overlap = (prev.transpose() * cur).map(f64::abs);
            let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(dim * dim);
            for t in 0..dim {
                let p = assignment[t];
                for c in 0..dim {
                    candidates.push((overlap[(p, c)], t, c));
                }
            }
            candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
            let mut taken_trace = vec![false; dim];
            let mut taken_col = vec![false; dim];
            let mut next = vec![usize::MAX; dim];
            for (_, t, c) in candidates {
                if taken_trace[t] || taken_col[c] {
                    continue;
                }
                taken_trace[t] = true;
                taken_col[c] = true;
                next[t] = c;
            }
            assignment = next;
            for t in 0..dim {
                traces[t].push(spectra[step].0[assignment[t]]);
            }
        }

        // center trace: zero-field eigenvector with the largest center weight
        let v0 = &spectra[0].1;
        let center_trace = (0..dim)
            .max_by(|&a, &b| v0[(center_index, a)].abs().total_cmp(&v0[(center_index, b)].abs()))
            .unwrap();
        let trace_origin = (0..dim)
            .map(|t| {
                (0..dim)
                    .max_by(|&a, &b| v0[(a, t)].abs().total_cmp(&v0[(b, t)].abs()))
                    .unwrap()
            })
            .collect();

        Ok(Self {
            field_grid: field_grid.to_vec(),
            basis: hamiltonian.basis.clone(),
            center,
            energy_window_ghz: spec.energy_window_ghz,
            max_delta_n: spec.max_delta_n,
            eigen_traces: traces,
            sorted_levels: spectra.into_iter().map(|(v, _)| v).collect(),
            center_trace,
            trace_origin,
            unperturbed_ghz: hamiltonian.energies_ghz.clone(),
        })
    }

    /// Shift of the center trace relative to zero field, GHz.
    pub fn center_shift(&self) -> Vec<f64> {
        let tr = &self.eigen_traces[self.center_trace];
        tr.iter().map(|e| e - tr[0]).collect()
    }

    /// Fit `ΔE = a·ℰ²` over the lowest `fraction` of the field range.
    /// Returns `(α = 2a in MHz/(V/cm)², R²)`.
    pub fn quadratic_fit(&self, fraction: f64) -> Result<(f64, f64)> {
        let f_max = *self.field_grid.last().unwrap() * fraction;
        let shift = self.center_shift();
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .field_grid
            .iter()
            .zip(&shift)
            .filter(|(f, _)| **f <= f_max * (1.0 + 1e-12))
            .map(|(f, s)| (f * f, *s))
            .unzip();
        if x.len() < 3 {
            return Err(Error::InvalidArgument("too few field points for a quadratic fit".into()));
        }
        let (a, r2) = fit_through_origin(&x, &y);
        Ok((2.0 * a * 1e3, r2))
    }

    /// Largest step-to-step jump along any trace, GHz.
    pub fn max_trace_jump(&self) -> f64 {
        self.eigen_traces
            .iter()
            .flat_map(|t| t.windows(2).map(|w| (w[1] - w[0]).abs()))
            .fold(0.0, f64::max)
    }

    /// Interior local minima of adjacent-level gaps that are smaller than
    /// the gap at both ends of the field range.
    pub fn anticrossings(&self) -> Vec<AntiCrossing> {
        let nf = self.field_grid.len();
        let dim = self.basis.len();
        let mut out = Vec::new();
        if nf < 3 {
            return out;
        }
        for k in 0..dim.saturating_sub(1) {
            let gap: Vec<f64> = self.sorted_levels.iter().map(|lv| lv[k + 1] - lv[k]).collect();
            for i in 1..nf - 1 {
                let g = gap[i];
                if g > 0.0 && g < gap[i - 1] && g <= gap[i + 1] && g < 0.5 * gap[0] && g < 0.5 * gap[nf - 1] {
                    out.push(AntiCrossing {
                        lower: k,
                        field_vcm: self.field_grid[i],
                        gap_ghz: g,
                    });
                }
            }
        }
        out
    }

    /// CSV: `field_vcm` then one column per trace (GHz).
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# center={} window_ghz={} max_delta_n={} basis={}\nfield_vcm",
            self.center.label(),
            self.energy_window_ghz,
            self.max_delta_n,
            self.basis.len()
        );
        for t in 0..self.eigen_traces.len() {
            let b = &self.basis[self.trace_origin[t]];
            s.push_str(&format!(",trace{t}_{}", b.label()));
        }
        s.push('\n');
        for (i, f) in self.field_grid.iter().enumerate() {
            s.push_str(&format!("{f}"));
            for t in &self.eigen_traces {
                s.push_str(&format!(",{}", t[i]));
            }
            s.push('\n');
        }
        s
    }
}

/// Stark map of `center` over `field_grid` (V/cm) in a basis truncated to
/// `energy_window_ghz` and `|Δn| ≤ 4`.
pub fn stark_map(
    species: &AtomSpecies,
    center: &RydbergState,
    energy_window_ghz: f64,
    field_grid: &[f64],
) -> Result<StarkMap> {
    let spec = StarkBasisSpec {
        energy_window_ghz,
        max_delta_n: 4,
    };
    let ham = StarkHamiltonian::build(species, center, &spec)?;
    StarkMap::from_hamiltonian(&ham, *center, &spec, field_grid)
}

fn check_low_l(state: &RydbergState) -> Result<()> {
    if state.l() > 3 {
        return Err(Error::LinearStark(format!(
            "{} lies in a degenerate manifold; its shift is linear in field",
            state.label()
        )));
    }
    Ok(())
}

/// Static polarizability from a quadratic fit to the state's Stark trace,
/// MHz/(V/cm)².
pub fn polarizability(species: &AtomSpecies, state: &RydbergState) -> Result<f64> {
    check_low_l(state)?;
    let spec = StarkBasisSpec::around(species, state)?;
    let ham = StarkHamiltonian::build(species, state, &spec)?;
    let idx = ham.index_of(state).expect("center is in its own basis");
    let (gap, d) = ham
        .nearest_coupled_gap(idx)
        .ok_or_else(|| Error::NumericalFailure("state couples to nothing in the basis".into()))?;
    // keep the strongest coupling a small fraction of the nearest gap
    let f_max = 0.02 * gap / (d * EA0_VCM_TO_GHZ);
    let grid: Vec<f64> = (0..=20).map(|i| f_max * i as f64 / 20.0).collect();
    let map = StarkMap::from_hamiltonian(&ham, *state, &spec, &grid)?;
    Ok(map.quadratic_fit(1.0)?.0)
}

/// Static polarizability from the second-order perturbation sum over the
/// same basis, MHz/(V/cm)².
pub fn polarizability_perturbative(species: &AtomSpecies, state: &RydbergState) -> Result<f64> {
    check_low_l(state)?;
    let spec = StarkBasisSpec::around(species, state)?;
    let ham = StarkHamiltonian::build(species, state, &spec)?;
    let idx = ham.index_of(state).expect("center is in its own basis");
    Ok(ham.perturbative_polarizability(idx))
}
