use std::f64::consts::PI;

use super::SpectralTrace;
use crate::constants::{EA0, PLANCK, VM_PER_VCM};
use crate::{Error, Result};

/// Default prominence threshold relative to the trace's dynamic range.
pub const DEFAULT_PROMINENCE: f64 = 0.1;

/// A local maximum with sub-grid position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    /// Quadratically interpolated abscissa.
    pub position: f64,
    pub value: f64,
    pub prominence: f64,
}

/// Local maxima whose topographic prominence is at least
/// `min_relative_prominence` of `max(y) − min(y)`, strongest first.
pub fn find_peaks(x: &[f64], y: &[f64], min_relative_prominence: f64) -> Vec<Peak> {
    let n = y.len().min(x.len());
    if n < 3 {
        return Vec::new();
    }
    let (lo, hi) = y[..n].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let range = hi - lo;
    if !(range > 0.0) {
        return Vec::new();
    }
    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if y[i] > y[i - 1] {
            // walk across a flat top
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                let k = (i + j) / 2;
                let prominence = y[k] - base_level(y, i, j);
                if prominence >= min_relative_prominence * range {
                    peaks.push(Peak {
                        index: k,
                        position: interpolate(x, y, k),
                        value: y[k],
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks.sort_by(|a, b| b.prominence.total_cmp(&a.prominence));
    peaks
}

/// Higher of the two minima reached before climbing above the plateau
/// `y[first..=last]` on either side.
fn base_level(y: &[f64], first: usize, last: usize) -> f64 {
    let top = y[first];
    let mut left = top;
    for &v in y[..first].iter().rev() {
        if v > top {
            break;
        }
        left = left.min(v);
    }
    let mut right = top;
    for &v in &y[last + 1..] {
        if v > top {
            break;
        }
        right = right.min(v);
    }
    left.max(right)
}

fn interpolate(x: &[f64], y: &[f64], k: usize) -> f64 {
    if k == 0 || k + 1 >= y.len() {
        return x[k];
    }
    let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
    let denom = a - 2.0 * b + c;
    if denom >= 0.0 {
        return x[k];
    }
    let p = (0.5 * (a - c) / denom).clamp(-1.0, 1.0);
    if p >= 0.0 {
        x[k] + p * (x[k + 1] - x[k])
    } else {
        x[k] + p * (x[k] - x[k - 1])
    }
}

/// Separation (Hz) of the two most prominent transmission peaks.
pub fn ats_splitting(trace: &SpectralTrace) -> Result<f64> {
    ats_splitting_with(trace, DEFAULT_PROMINENCE)
}

pub fn ats_splitting_with(trace: &SpectralTrace, min_relative_prominence: f64) -> Result<f64> {
    let peaks = find_peaks(&trace.detuning_grid, &trace.transmission, min_relative_prominence);
    if peaks.len() < 2 {
        return Err(Error::BelowAtsThreshold { peaks: peaks.len() });
    }
    Ok((peaks[0].position - peaks[1].position).abs() / (2.0 * PI))
}

/// RF amplitude (V/cm) whose Rabi frequency on `d₃₄` equals the splitting:
/// `ℰ = h·Δf/d₃₄`.
pub fn field_from_splitting(splitting_hz: f64, d34_ea0: f64) -> Result<f64> {
    if d34_ea0 == 0.0 || !d34_ea0.is_finite() {
        return Err(Error::InvalidArgument("RF transition dipole must be non-zero".into()));
    }
    if !(splitting_hz > 0.0) {
        return Err(Error::InvalidArgument("splitting must be positive".into()));
    }
    Ok(PLANCK * splitting_hz / (d34_ea0.abs() * EA0) / VM_PER_VCM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eit::{transmission_spectrum, uniform_grid, Doppler, LadderScheme};

    const MHZ: f64 = 2.0 * PI * 1e6;

    #[test]
    fn field_unit_arithmetic() {
        // h = 6.62607015e-34 J s, e a0 = 1.602176634e-19 C × 5.29177210903e-11 m
        let oracle = 6.62607015e-34 * 1e7 / (1000.0 * 1.602176634e-19 * 5.29177210903e-11) / 100.0;
        let e = field_from_splitting(1e7, 1000.0).unwrap();
        assert!((e - oracle).abs() < 1e-12 * oracle);
        assert!((e - 0.0078154).abs() < 1e-6);
        assert!((field_from_splitting(2e7, 1000.0).unwrap() - 2.0 * e).abs() < 1e-15);
        assert!(field_from_splitting(1e7, 0.0).is_err());
    }

    #[test]
    fn peaks_of_two_gaussians() {
        let x = uniform_grid(10.0, 201);
        let y: Vec<f64> = x
            .iter()
            .map(|v| (-(v - 2.03f64).powi(2)).exp() + 0.6 * (-(v + 3.0f64).powi(2)).exp() + 0.01 * (5.0 * v).sin())
            .collect();
        let p = find_peaks(&x, &y, 0.1);
        assert_eq!(p.len(), 2);
        assert!((p[0].position - 2.03).abs() < 0.05);
        assert!((p[1].position + 3.0).abs() < 0.05);
    }

    #[test]
    fn no_rf_is_below_threshold() {
        let s = LadderScheme::cs_default(1000.0);
        let t = transmission_spectrum(&s, &uniform_grid(30.0 * MHZ, 301), Doppler::Off).unwrap();
        assert!(matches!(ats_splitting(&t), Err(Error::BelowAtsThreshold { .. })));
    }

    #[test]
    fn resonant_splitting_tracks_rabi_frequency() {
        let s = LadderScheme::cs_default(1000.0);
        for omega in [10.0, 20.0] {
            let mut t = s;
            t.rabi_rf_rad_s = omega * MHZ;
            let trace = transmission_spectrum(&t, &uniform_grid(30.0 * MHZ, 1201), Doppler::Off).unwrap();
            let split = ats_splitting(&trace).unwrap();
            assert!((split / (omega * 1e6) - 1.0).abs() < 0.02, "{split}");
        }
    }
}
