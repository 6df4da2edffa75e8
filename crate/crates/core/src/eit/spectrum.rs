use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::master::{steady_state, DensityMatrix4, C64};
use super::LadderScheme;
use crate::constants::{EA0, EPSILON_0, HBAR};
use crate::{Error, Result};

/// Half-width of the velocity grid in thermal standard deviations.
const VELOCITY_SPAN_SIGMA: f64 = 4.5;
const MIN_VELOCITY_CLASSES: usize = 31;

/// Thermal motion treatment for a probe scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Doppler {
    Off,
    /// Average over a 1-D Maxwell–Boltzmann distribution sampled on
    /// `velocity_classes` evenly spaced velocities.
    On { velocity_classes: usize },
}

/// Probe transmission and susceptibility on an ascending detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTrace {
    /// Probe detuning Δ_P, rad/s.
    pub detuning_grid: Vec<f64>,
    pub transmission: Vec<f64>,
    pub susceptibility: Vec<C64>,
}

impl SpectralTrace {
    pub fn len(&self) -> usize {
        self.detuning_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detuning_grid.is_empty()
    }

    pub fn detuning_hz(&self) -> Vec<f64> {
        self.detuning_grid.iter().map(|d| d / (2.0 * PI)).collect()
    }

    /// Grid point of deepest absorption.
    pub fn argmin(&self) -> usize {
        argmin(&self.transmission)
    }

    /// Transmission interpolated linearly at detuning `x` (rad/s).
    pub fn transmission_at(&self, x: f64) -> Option<f64> {
        let g = &self.detuning_grid;
        if g.is_empty() || x < g[0] || x > g[g.len() - 1] {
            return None;
        }
        let k = g.partition_point(|&v| v <= x).clamp(1, g.len() - 1);
        let t = (x - g[k - 1]) / (g[k] - g[k - 1]);
        Some(self.transmission[k - 1] * (1.0 - t) + self.transmission[k] * t)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("detuning_Hz,transmission,re_chi,im_chi\n");
        for ((d, t), chi) in self.detuning_grid.iter().zip(&self.transmission).zip(&self.susceptibility) {
            let _ = writeln!(out, "{:.9e},{:.12e},{:.12e},{:.12e}", d / (2.0 * PI), t, chi.re, chi.im);
        }
        out
    }
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// `points` evenly spaced detunings covering `[-half_span, half_span]`.
pub fn uniform_grid(half_span: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| -half_span + 2.0 * half_span * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Linear probe susceptibility from the steady-state coherence.
///
/// `χ = −2N·d₁₂²·ρ₂₁/(ε₀ħΩ_P)`, so that absorption gives `Im χ > 0`.
pub fn probe_susceptibility(scheme: &LadderScheme, rho: &DensityMatrix4) -> Result<C64> {
    if !(scheme.rabi_probe_rad_s > 0.0) {
        return Err(Error::InvalidArgument("susceptibility is undefined for a zero probe Rabi frequency".into()));
    }
    let d = scheme.probe_dipole_ea0 * EA0;
    let prefactor = 2.0 * scheme.cell.atom_density_m3 * d * d / (EPSILON_0 * HBAR * scheme.rabi_probe_rad_s);
    Ok(-prefactor * rho.element(2, 1))
}

fn transmission_from_chi(scheme: &LadderScheme, chi: C64) -> f64 {
    (-scheme.probe_wavenumber() * chi.im * scheme.cell.length_m).exp().clamp(0.0, 1.0)
}

/// Velocity classes and normalized Gaussian weights.
fn velocity_classes(sigma: f64, count: usize) -> Vec<(f64, f64)> {
    let grid = uniform_grid(VELOCITY_SPAN_SIGMA * sigma, count);
    let weights: Vec<f64> = grid.iter().map(|v| (-0.5 * (v / sigma).powi(2)).exp()).collect();
    let total: f64 = weights.iter().sum();
    grid.into_iter().zip(weights).map(|(v, w)| (v, w / total)).collect()
}

/// Susceptibility at the scheme's own detunings, optionally velocity averaged.
pub(crate) fn susceptibility_at(scheme: &LadderScheme, doppler: Doppler) -> Result<C64> {
    match doppler {
        Doppler::On { velocity_classes: n } if scheme.cell.temperature_k > 0.0 => {
            if n < MIN_VELOCITY_CLASSES {
                return Err(Error::InvalidArgument(format!(
                    "{n} velocity classes; at least {MIN_VELOCITY_CLASSES} are required"
                )));
            }
            let (kp, kc) = (scheme.probe_wavenumber(), scheme.coupling_wavenumber());
            let mut chi = C64::new(0.0, 0.0);
            for (v, w) in velocity_classes(scheme.thermal_velocity(), n) {
                let mut moving = *scheme;
                moving.detune_probe_rad_s -= kp * v;
                moving.detune_coupling_rad_s += kc * v;
                let rho = steady_state(&moving)?;
                chi += w * probe_susceptibility(&moving, &rho)?;
            }
            Ok(chi)
        }
        _ => probe_susceptibility(scheme, &steady_state(scheme)?),
    }
}

/// Probe transmission at the scheme's current detunings.
pub(crate) fn transmission_at(scheme: &LadderScheme, doppler: Doppler) -> Result<f64> {
    Ok(transmission_from_chi(scheme, susceptibility_at(scheme, doppler)?))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::InvalidArgument("detuning grid needs at least three points".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("detuning grid must be finite and strictly ascending".into()));
    }
    Ok(())
}

/// Probe scan `T(Δ_P) = exp(−k_P·Im χ·L)`. Each grid point is an
/// independent steady-state solve, evaluated in parallel.
pub fn transmission_spectrum(scheme: &LadderScheme, probe_detuning_grid: &[f64], doppler: Doppler) -> Result<SpectralTrace> {
    scheme.validate()?;
    check_grid(probe_detuning_grid)?;
    let span = 5.0 * scheme.gamma2_rad_s;
    if probe_detuning_grid[0] > -span || probe_detuning_grid[probe_detuning_grid.len() - 1] < span {
        return Err(Error::InvalidArgument("detuning grid must span at least ±5γ₂".into()));
    }
    let susceptibility = probe_detuning_grid
        .par_iter()
        .map(|&d| susceptibility_at(&scheme.with_probe_detuning(d), doppler))
        .collect::<Result<Vec<_>>>()?;
    let transmission = susceptibility.iter().map(|&c| transmission_from_chi(scheme, c)).collect();
    Ok(SpectralTrace {
        detuning_grid: probe_detuning_grid.to_vec(),
        transmission,
        susceptibility,
    })
}

/// Thermal-averaged probe scan. At zero temperature this is exactly the
/// stationary-atom spectrum.
pub fn doppler_average(scheme: &LadderScheme, probe_detuning_grid: &[f64], velocity_classes: usize) -> Result<SpectralTrace> {
    if velocity_classes < MIN_VELOCITY_CLASSES {
        return Err(Error::InvalidArgument(format!(
            "{velocity_classes} velocity classes; at least {MIN_VELOCITY_CLASSES} are required"
        )));
    }
    transmission_spectrum(scheme, probe_detuning_grid, Doppler::On { velocity_classes })
}

/// FWHM (Hz) of the EIT feature, taken as the coupling-induced
/// transmission change `T(Ω_C) − T(Ω_C = 0)` around its maximum.
///
/// The grid only needs to bracket the feature, so it may be much narrower
/// than a full spectrum scan.
pub fn eit_linewidth(scheme: &LadderScheme, probe_detuning_grid: &[f64], doppler: Doppler) -> Result<f64> {
    scheme.validate()?;
    check_grid(probe_detuning_grid)?;
    let mut bare = *scheme;
    bare.rabi_coupling_rad_s = 0.0;
    let diff = probe_detuning_grid
        .par_iter()
        .map(|&d| {
            let with = transmission_at(&scheme.with_probe_detuning(d), doppler)?;
            let without = transmission_at(&bare.with_probe_detuning(d), doppler)?;
            Ok(with - without)
        })
        .collect::<Result<Vec<f64>>>()?;
    fwhm(probe_detuning_grid, &diff)
        .map(|w| w / (2.0 * PI))
        .ok_or_else(|| Error::NumericalFailure("EIT feature is not resolved inside the detuning grid".into()))
}

/// Full width at half maximum around the global maximum, with linear
/// interpolation of both half-height crossings.
pub(crate) fn fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    let peak = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i)?;
    let half = 0.5 * y[peak];
    if !(half > 0.0) {
        return None;
    }
    let crossing = |a: usize, b: usize| x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
    let left = (1..=peak).rev().find(|&i| y[i - 1] < half).map(|i| crossing(i - 1, i))?;
    let right = (peak..y.len() - 1).find(|&i| y[i + 1] < half).map(|i| crossing(i, i + 1))?;
    Some(right - left)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MHZ: f64 = 2.0 * PI * 1e6;

    fn grid(half_mhz: f64, n: usize) -> Vec<f64> {
        uniform_grid(half_mhz * MHZ, n)
    }

    fn probe_only() -> LadderScheme {
        let mut s = LadderScheme::cs_default(1000.0);
        s.rabi_coupling_rad_s = 0.0;
        s
    }

    #[test]
    fn two_level_susceptibility_is_lorentzian() {
        let mut s = probe_only();
        s.rabi_probe_rad_s = 0.01 * MHZ;
        let g = s.gamma2_rad_s;
        let chi0 = probe_susceptibility(&s, &steady_state(&s).unwrap()).unwrap().im;
        for d in [0.5, 2.6, 7.0, 20.0] {
            let t = s.with_probe_detuning(d * MHZ);
            let chi = probe_susceptibility(&t, &steady_state(&t).unwrap()).unwrap();
            let sat = g * g / 4.0 + s.rabi_probe_rad_s.powi(2) / 2.0;
            let oracle = chi0 * sat / ((d * MHZ).powi(2) + sat);
            assert!((chi.im - oracle).abs() < 1e-6 * chi0, "{} vs {oracle}", chi.im);
        }
    }

    #[test]
    fn dispersion_is_odd_about_resonance() {
        let s = LadderScheme::cs_default(1000.0);
        let trace = transmission_spectrum(&s, &grid(30.0, 61), Doppler::Off).unwrap();
        let n = trace.len();
        for i in 0..n {
            let (a, b) = (trace.susceptibility[i], trace.susceptibility[n - 1 - i]);
            assert!((a.re + b.re).abs() < 1e-9 * a.norm().max(1e-12));
            assert!((a.im - b.im).abs() < 1e-9 * a.norm().max(1e-12));
        }
    }

    #[test]
    fn zero_probe_is_rejected() {
        let mut s = LadderScheme::cs_default(1000.0);
        let rho = steady_state(&s).unwrap();
        s.rabi_probe_rad_s = 0.0;
        assert!(matches!(probe_susceptibility(&s, &rho), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn scenario_shapes() {
        let g = grid(40.0, 401);
        let i = transmission_spectrum(&probe_only(), &g, Doppler::Off).unwrap();
        assert_eq!(i.argmin(), 200);

        let ii_scheme = LadderScheme::cs_default(1000.0);
        let ii = transmission_spectrum(&ii_scheme, &g, Doppler::Off).unwrap();
        assert!(ii.transmission[200] > i.transmission[200]);
        assert!(ii.susceptibility[200].im < ii.susceptibility[190].im);

        let iii = transmission_spectrum(&ii_scheme.with_rf_field(ii_scheme.rf_field_vcm() + 0.02), &g, Doppler::Off)
            .unwrap();
        let maxima = (1..g.len() - 1)
            .filter(|&k| iii.transmission[k] > iii.transmission[k - 1] && iii.transmission[k] >= iii.transmission[k + 1])
            .count();
        assert_eq!(maxima, 2);
    }

    #[test]
    fn transmission_is_bounded_and_grid_independent() {
        let s = LadderScheme::cs_default(1000.0).with_rf_field(0.01);
        let coarse = transmission_spectrum(&s, &grid(30.0, 61), Doppler::Off).unwrap();
        let fine = transmission_spectrum(&s, &grid(30.0, 601), Doppler::Off).unwrap();
        for (k, t) in coarse.transmission.iter().enumerate() {
            assert!((0.0..=1.0).contains(t));
            assert!((t - fine.transmission[10 * k]).abs() < 1e-4);
        }
    }

    #[test]
    fn grid_preconditions() {
        let s = LadderScheme::cs_default(1000.0);
        assert!(transmission_spectrum(&s, &grid(10.0, 51), Doppler::Off).is_err());
        assert!(transmission_spectrum(&s, &[3.0, 2.0, 1.0], Doppler::Off).is_err());
        assert!(doppler_average(&s, &grid(30.0, 31), 11).is_err());
    }

    #[test]
    fn zero_temperature_doppler_is_identity() {
        let mut s = LadderScheme::cs_default(1000.0);
        s.cell.temperature_k = 0.0;
        let g = grid(30.0, 41);
        let a = transmission_spectrum(&s, &g, Doppler::Off).unwrap();
        let b = doppler_average(&s, &g, 101).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let s = LadderScheme::cs_default(1000.0);
        let t = transmission_spectrum(&s, &grid(30.0, 31), Doppler::Off).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("detuning_Hz,transmission,re_chi,im_chi"));
        assert_eq!(lines.count(), 31);
    }

    #[test]
    fn fwhm_of_a_lorentzian() {
        let x = uniform_grid(10.0, 4001);
        let y: Vec<f64> = x.iter().map(|v| 1.0 / (1.0 + v * v)).collect();
        assert!((fwhm(&x, &y).unwrap() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn eit_contrast_grows_with_coupling() {
        let mut s = LadderScheme::cs_default(1000.0);
        s.cell.atom_density_m3 = 1e14;
        let mut last = 0.0;
        for oc in [0.5, 1.0, 2.0, 4.0, 8.0] {
            s.rabi_coupling_rad_s = oc * MHZ;
            let t = transmission_at(&s, Doppler::Off).unwrap();
            assert!(t > last);
            last = t;
        }
    }
}
