use std::f64::consts::PI;

use nalgebra::Complex;

use super::{ComplexSeries, RealSeries};
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Stopband attenuation of the down-conversion filter, dB.
const STOPBAND_DB: f64 = 70.0;

/// Linear-phase Kaiser-windowed sinc lowpass.
#[derive(Debug, Clone, PartialEq)]
pub struct FirLowpass {
    pub taps: Vec<f64>,
    pub sample_rate_hz: f64,
}

impl FirLowpass {
    /// Kaiser design with cutoff midway through `[pass_edge, stop_edge]`
    /// and the given stopband attenuation. Taps are normalized to unit DC gain.
    pub fn kaiser(pass_edge_hz: f64, stop_edge_hz: f64, attenuation_db: f64, sample_rate_hz: f64) -> Result<Self> {
        if !(0.0 < pass_edge_hz && pass_edge_hz < stop_edge_hz && stop_edge_hz < 0.5 * sample_rate_hz) {
            return Err(Error::InvalidArgument(format!(
                "filter edges {pass_edge_hz}/{stop_edge_hz} Hz incompatible with sample rate {sample_rate_hz} Hz"
            )));
        }
        let beta = if attenuation_db > 50.0 {
            0.1102 * (attenuation_db - 8.7)
        } else if attenuation_db >= 21.0 {
            0.5842 * (attenuation_db - 21.0).powf(0.4) + 0.07886 * (attenuation_db - 21.0)
        } else {
            0.0
        };
        let transition = 2.0 * PI * (stop_edge_hz - pass_edge_hz) / sample_rate_hz;
        let mut len = ((attenuation_db - 7.95) / (2.285 * transition)).ceil() as usize + 1;
        if len.is_multiple_of(2) {
            len += 1;
        }
        let fc = 0.5 * (pass_edge_hz + stop_edge_hz) / sample_rate_hz;
        let mid = (len - 1) as f64 / 2.0;
        let i0_beta = bessel_i0(beta);
        let mut taps: Vec<f64> = (0..len)
            .map(|k| {
                let m = k as f64 - mid;
                let sinc = if m == 0.0 { 2.0 * fc } else { (2.0 * PI * fc * m).sin() / (PI * m) };
                let r = m / mid;
                sinc * bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / i0_beta
            })
            .collect();
        let dc: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= dc);
        Ok(Self { taps, sample_rate_hz })
    }

    /// Group delay in samples.
    pub fn delay(&self) -> usize {
        (self.taps.len() - 1) / 2
    }

    /// Complex frequency response at `f` Hz.
    pub fn response(&self, f: f64) -> C64 {
        let w = 2.0 * PI * f / self.sample_rate_hz;
        self.taps
            .iter()
            .enumerate()
            .map(|(k, &h)| h * C64::from_polar(1.0, -w * k as f64))
            .sum()
    }

    /// Zero-phase filtering: convolution aligned by the group delay, zero
    /// padded at both ends.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let d = self.delay() as isize;
        let n = x.len() as isize;
        (0..n)
            .map(|i| {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &h) in self.taps.iter().enumerate() {
                    let j = i + d - k as isize;
                    if (0..n).contains(&j) {
                        acc += x[j as usize] * h;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Zeroth-order modified Bessel function of the first kind (power series).
fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Digital IQ mixer and lowpass: `z[n] = LPF{x[n]·e^{−j2π f_if n/f_s}}`.
///
/// The filter passes `|f| ≤ W` and reaches 70 dB attenuation at `1.5·W`,
/// so a tone at `f_if + δ` with `|δ| < W` appears at `δ` with half its
/// input amplitude.
pub fn downconvert(photocurrent: &RealSeries, f_if: f64, bandwidth: f64) -> Result<ComplexSeries> {
    if !(bandwidth > 0.0) {
        return Err(Error::InvalidArgument("bandwidth must be positive".into()));
    }
    if f_if <= bandwidth {
        return Err(Error::ImageOverlap { f_if, bandwidth });
    }
    let fs = photocurrent.sample_rate_hz;
    if fs < 4.0 * f_if {
        return Err(Error::InvalidArgument(format!(
            "sample rate {fs} Hz must be at least 4× the IF ({f_if} Hz)"
        )));
    }
    let filter = FirLowpass::kaiser(bandwidth, 1.5 * bandwidth, STOPBAND_DB, fs)?;
    let mixed: Vec<C64> = photocurrent
        .values
        .iter()
        .enumerate()
        .map(|(n, &x)| C64::from_polar(x, -2.0 * PI * (n as f64 * f_if / fs).fract()))
        .collect();
    Ok(ComplexSeries::new(fs, bandwidth, filter.apply(&mixed)))
}

/// Uniform resampling by an integer decimation factor.
pub fn sample(baseband: &ComplexSeries, rate: f64) -> Result<ComplexSeries> {
    let nyquist = 2.0 * baseband.bandwidth_hz;
    if rate < nyquist * (1.0 - 1e-12) {
        return Err(Error::AliasingConfig { rate, nyquist });
    }
    let ratio = baseband.sample_rate_hz / rate;
    let factor = ratio.round();
    if factor < 1.0 || (ratio - factor).abs() > 1e-9 * ratio {
        return Err(Error::InvalidArgument(format!(
            "sample rate {rate} Hz must divide the input rate {} Hz",
            baseband.sample_rate_hz
        )));
    }
    let step = factor as usize;
    Ok(ComplexSeries::new(
        rate,
        baseband.bandwidth_hz,
        baseband.values.iter().step_by(step).copied().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        assert!((bessel_i0(0.0) - 1.0).abs() < 1e-15);
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-14);
        assert!((bessel_i0(5.0) - 27.239_871_823_604_45).abs() < 1e-11);
    }

    #[test]
    fn filter_meets_mask() {
        let f = FirLowpass::kaiser(1e5, 1.5e5, STOPBAND_DB, 8e6).unwrap();
        for k in 0..=100 {
            let g = 20.0 * f.response(1e3 * k as f64).norm().log10();
            assert!(g.abs() < 0.5, "passband {k} kHz: {g} dB");
        }
        for k in 150..400 {
            let g = 20.0 * f.response(1e3 * k as f64).norm().log10();
            assert!(g < -60.0, "stopband {k} kHz: {g} dB");
        }
    }

    #[test]
    fn image_and_aliasing_guards() {
        let x = RealSeries::new(1e6, vec![0.0; 16]);
        assert!(matches!(downconvert(&x, 1e4, 2e4), Err(Error::ImageOverlap { .. })));
        let z = ComplexSeries::new(1e6, 1e4, vec![C64::new(0.0, 0.0); 16]);
        assert!(matches!(sample(&z, 1.5e4), Err(Error::AliasingConfig { .. })));
        assert_eq!(sample(&z, 2e4).unwrap().values.len(), 1);
    }
}
