use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{steering_vector, trial_rng, ArrayGeometry, Experiment};
use crate::{Error, Result};

type C64 = Complex<f64>;

const GRID_STEP_RAD: f64 = 1e-3;
const GOLDEN_TOL_RAD: f64 = 1e-9;

/// Cramér–Rao bound on θ (rad²) for one narrowband source on a ULA with
/// `snapshots` independent snapshots at per-element SNR `snr` (linear).
pub fn doa_crb(geometry: &ArrayGeometry, theta: f64, snapshots: usize, snr: f64) -> Result<f64> {
    geometry.validate()?;
    let m = geometry.elements as f64;
    let k = 2.0 * PI * geometry.spacing_wavelengths * theta.cos();
    if geometry.elements < 2 || snapshots == 0 || !(snr > 0.0) || k.abs() < 1e-12 {
        return Err(Error::Unidentifiable);
    }
    Ok(6.0 / (snapshots as f64 * snr * k * k * m * (m * m - 1.0)))
}

/// Sample covariance `R̂ = Y Yᴴ / T` of an `M × T` snapshot matrix.
pub fn sample_covariance(snapshots: &DMatrix<C64>) -> DMatrix<C64> {
    snapshots * snapshots.adjoint() / C64::from(snapshots.ncols() as f64)
}

fn beam_power(geometry: &ArrayGeometry, r: &DMatrix<C64>, theta: f64) -> f64 {
    let a = steering_vector(geometry, theta);
    (a.adjoint() * r * &a)[(0, 0)].re
}

/// Single-source maximum-likelihood DOA: the maximizer of `aᴴ(θ) R̂ a(θ)`
/// over θ ∈ [−π/2, π/2], found on a 1 mrad grid and refined by
/// golden-section search.
pub fn doa_estimate(geometry: &ArrayGeometry, snapshots: &DMatrix<C64>) -> Result<f64> {
    geometry.validate()?;
    if snapshots.nrows() != geometry.elements {
        return Err(Error::InvalidArgument(format!(
            "snapshot matrix has {} rows for {} elements",
            snapshots.nrows(),
            geometry.elements
        )));
    }
    if snapshots.ncols() < geometry.elements {
        return Err(Error::InvalidArgument(format!(
            "{} snapshots is fewer than the {} array elements",
            snapshots.ncols(),
            geometry.elements
        )));
    }
    let r = sample_covariance(snapshots);
    let scale = r.diagonal().iter().map(|z| z.re).sum::<f64>();
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::EstimationFailure("sample covariance is degenerate".into()));
    }
    let steps = (PI / GRID_STEP_RAD).floor() as usize;
    let grid = |i: usize| -PI / 2.0 + i as f64 * GRID_STEP_RAD;
    let (best, _) = (0..=steps)
        .map(|i| (i, beam_power(geometry, &r, grid(i))))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let mut lo = (grid(best) - GRID_STEP_RAD).max(-PI / 2.0);
    let mut hi = (grid(best) + GRID_STEP_RAD).min(PI / 2.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = beam_power(geometry, &r, x1);
    let mut f2 = beam_power(geometry, &r, x2);
    while hi - lo > GOLDEN_TOL_RAD {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = beam_power(geometry, &r, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = beam_power(geometry, &r, x1);
        }
    }
    let theta = 0.5 * (lo + hi);
    if !theta.is_finite() {
        return Err(Error::EstimationFailure("search diverged".into()));
    }
    Ok(theta)
}

/// Monte Carlo DOA experiment parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoaSetup {
    pub geometry: ArrayGeometry,
    pub theta_rad: f64,
    pub snapshots: usize,
    pub trials: u32,
    pub seed: u64,
}

impl Default for DoaSetup {
    fn default() -> Self {
        Self {
            geometry: ArrayGeometry::default(),
            theta_rad: 0.3,
            snapshots: 64,
            trials: 500,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoaPoint {
    pub snr_db: f64,
    /// Mean squared θ error, rad².
    pub mse: f64,
    pub mse_stderr: f64,
    pub crb: f64,
    pub trials: u32,
}

/// Snapshots `y_t = a(θ)·s_t + n_t` with unit-modulus random-phase `s_t`
/// of power `snr` and unit-power circular Gaussian noise.
pub fn draw_snapshots<R: Rng + ?Sized>(
    geometry: &ArrayGeometry,
    theta: f64,
    snapshots: usize,
    snr: f64,
    rng: &mut R,
) -> DMatrix<C64> {
    let a = steering_vector(geometry, theta);
    let amp = snr.sqrt();
    let sigma = 0.5f64.sqrt();
    let mut y = DMatrix::zeros(geometry.elements, snapshots);
    for t in 0..snapshots {
        let s = C64::from_polar(amp, 2.0 * PI * rng.random::<f64>());
        for m in 0..geometry.elements {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            y[(m, t)] = a[m] * s + C64::new(re, im) * sigma;
        }
    }
    y
}

/// ML DOA mean squared error against the CRB at each per-element SNR (dB).
pub fn simulate_doa(setup: &DoaSetup, snr_db: &[f64]) -> Result<Vec<DoaPoint>> {
    setup.geometry.validate()?;
    if setup.trials < 2 {
        return Err(Error::InvalidArgument("need at least two DOA trials".into()));
    }
    snr_db
        .iter()
        .enumerate()
        .map(|(point, &db)| {
            let snr = 10f64.powf(db / 10.0);
            let crb = doa_crb(&setup.geometry, setup.theta_rad, setup.snapshots, snr)?;
            let errors: Vec<f64> = (0..setup.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(setup.seed, Experiment::Doa, point as u32, t);
                    let y = draw_snapshots(&setup.geometry, setup.theta_rad, setup.snapshots, snr, &mut rng);
                    doa_estimate(&setup.geometry, &y).map(|th| (th - setup.theta_rad).powi(2))
                })
                .collect::<Result<_>>()?;
            let n = errors.len() as f64;
            let mse = errors.iter().sum::<f64>() / n;
            let var = errors.iter().map(|e| (e - mse).powi(2)).sum::<f64>() / (n - 1.0);
            Ok(DoaPoint {
                snr_db: db,
                mse,
                mse_stderr: (var / n).sqrt(),
                crb,
                trials: setup.trials,
            })
        })
        .collect()
}
