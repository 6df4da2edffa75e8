use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::constants::ELEMENTARY_CHARGE;
use crate::{Error, Result};

/// Optical detection scheme for the probe beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhotodetectMode {
    /// Direct incoherent detection on a single photodiode.
    Diod,
    /// Balanced coherent detection against an optical local oscillator,
    /// phase locked to the probe's amplitude quadrature.
    Bcod,
}

impl std::fmt::Display for PhotodetectMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhotodetectMode::Diod => "diod",
            PhotodetectMode::Bcod => "bcod",
        })
    }
}

impl std::str::FromStr for PhotodetectMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diod" => Ok(Self::Diod),
            "bcod" => Ok(Self::Bcod),
            other => Err(Error::InvalidArgument(format!("unknown photodetection mode '{other}'"))),
        }
    }
}

/// Photodiode and balanced-detector parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Photodetector {
    pub responsivity_a_per_w: f64,
    /// Input-referred current noise of the transimpedance stage, A/√Hz.
    pub electrical_noise_a_rthz: f64,
    /// Optical local-oscillator power for balanced detection, W.
    pub lo_power_w: f64,
    /// Power fraction of the probe sent to the positive branch.
    pub splitter_ratio: f64,
    /// Fractional RMS laser intensity noise per sample (probe for DIOD,
    /// optical LO for BCOD).
    pub relative_intensity_noise: f64,
}

impl Default for Photodetector {
    fn default() -> Self {
        Self {
            responsivity_a_per_w: 0.5,
            electrical_noise_a_rthz: 5e-12,
            lo_power_w: 1e-3,
            splitter_ratio: 0.5,
            relative_intensity_noise: 0.0,
        }
    }
}

/// Per-sample noise bandwidth. White noise of one-sided PSD `S` gives
/// per-sample variance `S·bandwidth_hz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBand {
    pub bandwidth_hz: f64,
}

/// Converts optical power samples (W) to photocurrent (A).
///
/// DIOD: `i = R·P` plus shot noise of variance `2qR·P·W`. BCOD: the probe
/// and LO are mixed on a beam splitter and the two branch currents are
/// subtracted; for `splitter_ratio = ½` the LO power and its intensity
/// noise cancel exactly, leaving `2R·√(P·P_LO)`. Shot noise is drawn
/// independently per branch. Pass `noise = None` for a noiseless detector.
pub fn photodetect<R: Rng + ?Sized>(
    optical_power: &[f64],
    mode: PhotodetectMode,
    detector: &Photodetector,
    noise: Option<NoiseBand>,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if let Some((i, p)) = optical_power.iter().enumerate().find(|(_, p)| !(**p >= 0.0)) {
        return Err(Error::InvalidArgument(format!("optical power sample {i} is {p} W")));
    }
    let r = detector.responsivity_a_per_w;
    let gauss = |rng: &mut R| -> f64 { StandardNormal.sample(rng) };
    let out = optical_power
        .iter()
        .map(|&p| {
            let rin = match noise {
                Some(_) if detector.relative_intensity_noise > 0.0 => detector.relative_intensity_noise * gauss(rng),
                _ => 0.0,
            };
            match mode {
                PhotodetectMode::Diod => {
                    let p = p * (1.0 + rin).max(0.0);
                    let mut i = r * p;
                    if let Some(band) = noise {
                        i += (2.0 * ELEMENTARY_CHARGE * r * p * band.bandwidth_hz).sqrt() * gauss(rng);
                        i += detector.electrical_noise_a_rthz * band.bandwidth_hz.sqrt() * gauss(rng);
                    }
                    i
                }
                PhotodetectMode::Bcod => {
                    let lo = detector.lo_power_w * (1.0 + rin).max(0.0);
                    let k = detector.splitter_ratio;
                    let beat = 2.0 * (k * (1.0 - k) * p * lo).sqrt();
                    let plus = k * p + (1.0 - k) * lo + beat;
                    let minus = (1.0 - k) * p + k * lo - beat;
                    let mut i = r * (plus - minus);
                    if let Some(band) = noise {
                        for branch in [plus, minus] {
                            i += (2.0 * ELEMENTARY_CHARGE * r * branch.max(0.0) * band.bandwidth_hz).sqrt() * gauss(rng);
                        }
                        i += detector.electrical_noise_a_rthz * band.bandwidth_hz.sqrt() * gauss(rng);
                    }
                    i
                }
            }
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_diod_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let i = photodetect(&[2e-5; 8], PhotodetectMode::Diod, &Photodetector::default(), None, &mut rng).unwrap();
        assert!(i.iter().all(|&v| (v - 1e-5).abs() < 1e-20));
    }

    #[test]
    fn negative_power_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = photodetect(&[1e-6, -1e-9], PhotodetectMode::Diod, &Photodetector::default(), None, &mut rng);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn balanced_beat_amplitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let det = Photodetector::default();
        let i = photodetect(&[1e-5], PhotodetectMode::Bcod, &det, None, &mut rng).unwrap();
        let oracle = 2.0 * 0.5 * (1e-5f64 * 1e-3).sqrt();
        assert!((i[0] - oracle).abs() < 1e-15);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("BCOD".parse::<PhotodetectMode>().unwrap(), PhotodetectMode::Bcod);
        assert!("coherent".parse::<PhotodetectMode>().is_err());
    }
}
