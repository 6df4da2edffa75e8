use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

type C64 = Complex<f64>;

/// Gray-mapped constellations with unit average symbol energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Qpsk,
    #[serde(rename = "16qam")]
    Qam16,
}

impl std::str::FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Self::Bpsk),
            "qpsk" => Ok(Self::Qpsk),
            "16qam" | "qam16" => Ok(Self::Qam16),
            other => Err(Error::InvalidArgument(format!("unsupported modulation '{other}'"))),
        }
    }
}

impl std::fmt::Display for Modulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "16qam",
        })
    }
}

const QAM16_SCALE: f64 = 0.316_227_766_016_837_94; // 1/√10

/// Gray pair → amplitude level: 00 → −3, 01 → −1, 11 → +1, 10 → +3.
fn pam4_level(b0: u8, b1: u8) -> f64 {
    match (b0, b1) {
        (0, 0) => -3.0,
        (0, 1) => -1.0,
        (1, 1) => 1.0,
        _ => 3.0,
    }
}

fn pam4_bits(x: f64) -> (u8, u8) {
    if x < -2.0 {
        (0, 0)
    } else if x < 0.0 {
        (0, 1)
    } else if x < 2.0 {
        (1, 1)
    } else {
        (1, 0)
    }
}

impl Modulation {
    pub fn bits_per_symbol(&self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
        }
    }

    /// Maps `bits_per_symbol()` bits (0/1) to a symbol.
    pub fn map(&self, bits: &[u8]) -> C64 {
        let s = |b: u8| 1.0 - 2.0 * b as f64;
        match self {
            Modulation::Bpsk => C64::new(s(bits[0]), 0.0),
            Modulation::Qpsk => C64::new(s(bits[0]), s(bits[1])) * FRAC_1_SQRT_2,
            Modulation::Qam16 => C64::new(pam4_level(bits[0], bits[1]), pam4_level(bits[2], bits[3])) * QAM16_SCALE,
        }
    }

    /// Minimum-distance decision on an equalized sample.
    pub fn demap(&self, z: C64, bits: &mut [u8]) {
        let hard = |x: f64| u8::from(x < 0.0);
        match self {
            Modulation::Bpsk => bits[0] = hard(z.re),
            Modulation::Qpsk => {
                bits[0] = hard(z.re);
                bits[1] = hard(z.im);
            }
            Modulation::Qam16 => {
                let (a, b) = pam4_bits(z.re / QAM16_SCALE);
                let (c, d) = pam4_bits(z.im / QAM16_SCALE);
                bits.copy_from_slice(&[a, b, c, d]);
            }
        }
    }
}
