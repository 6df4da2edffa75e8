use std::io::{self, Read, Write};

use nalgebra::Complex;

use crate::{Error, Result};

type C64 = Complex<f64>;

/// Magic bytes opening a binary complex stream.
const MAGIC: &[u8; 8] = b"RAQRCPLX";
const FORMAT_VERSION: u32 = 1;

/// Uniformly sampled real signal starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSeries {
    pub sample_rate_hz: f64,
    pub values: Vec<f64>,
}

/// Uniformly sampled complex baseband signal starting at `t = 0`.
///
/// `bandwidth_hz` is the one-sided bandwidth the stream was filtered to;
/// `sample` uses it for the Nyquist check.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    pub sample_rate_hz: f64,
    pub bandwidth_hz: f64,
    pub values: Vec<C64>,
}

impl RealSeries {
    pub fn new(sample_rate_hz: f64, values: Vec<f64>) -> Self {
        Self { sample_rate_hz, values }
    }

    pub fn time(&self, index: usize) -> f64 {
        index as f64 / self.sample_rate_hz
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len().max(1) as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (self.values.len().max(2) - 1) as f64
    }

    /// CSV with header `t_s,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{:.12e},{:.12e}\n", self.time(i), v));
        }
        out
    }
}

impl ComplexSeries {
    pub fn new(sample_rate_hz: f64, bandwidth_hz: f64, values: Vec<C64>) -> Self {
        Self {
            sample_rate_hz,
            bandwidth_hz,
            values,
        }
    }

    pub fn time(&self, index: usize) -> f64 {
        index as f64 / self.sample_rate_hz
    }

    /// Mean over the central `fraction` of the stream, skipping filter
    /// transients at both ends.
    pub fn central_mean(&self, fraction: f64) -> C64 {
        let n = self.values.len();
        let skip = ((1.0 - fraction.clamp(0.0, 1.0)) * 0.5 * n as f64) as usize;
        let body = &self.values[skip..n - skip];
        body.iter().sum::<C64>() / body.len().max(1) as f64
    }

    /// CSV with header `t_s,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,re,im\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", self.time(i), v.re, v.im));
        }
        out
    }

    /// Binary stream: 8-byte magic `RAQRCPLX`, `u32` format version,
    /// `f64` sample rate, `f64` bandwidth, `u64` sample count, then
    /// interleaved `f64` (re, im) pairs. Everything little-endian.
    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&self.sample_rate_hz.to_le_bytes())?;
        w.write_all(&self.bandwidth_hz.to_le_bytes())?;
        w.write_all(&(self.values.len() as u64).to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse("not a complex sample stream (bad magic)".into()));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported stream version {version}")));
        }
        let mut b8 = [0u8; 8];
        let mut next_f64 = |r: &mut R| -> Result<f64> {
            r.read_exact(&mut b8)?;
            Ok(f64::from_le_bytes(b8))
        };
        let sample_rate_hz = next_f64(&mut r)?;
        let bandwidth_hz = next_f64(&mut r)?;
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let count = u64::from_le_bytes(b8) as usize;
        let mut values = Vec::with_capacity(count.min(1 << 24));
        let mut pair = [0u8; 16];
        for _ in 0..count {
            r.read_exact(&mut pair)?;
            let re = f64::from_le_bytes(pair[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(pair[8..].try_into().expect("8 bytes"));
            values.push(C64::new(re, im));
        }
        Ok(Self {
            sample_rate_hz,
            bandwidth_hz,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let s = ComplexSeries::new(1e6, 1e5, (0..37).map(|k| C64::new(k as f64 * 0.5, -(k as f64).sqrt())).collect());
        let mut buf = Vec::new();
        s.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 4 + 8 + 8 + 8 + 37 * 16);
        assert_eq!(ComplexSeries::read_binary(buf.as_slice()).unwrap(), s);
        buf[0] = b'X';
        assert!(ComplexSeries::read_binary(buf.as_slice()).is_err());
    }

    #[test]
    fn csv_headers() {
        let r = RealSeries::new(10.0, vec![1.0, 2.0]);
        assert!(r.to_csv().starts_with("t_s,value\n0.000000000000e0,1.000000000000e0\n1.000000000000e-1,"));
        let c = ComplexSeries::new(10.0, 1.0, vec![C64::new(1.0, 2.0)]);
        assert_eq!(c.to_csv().lines().next(), Some("t_s,re,im"));
    }
}
