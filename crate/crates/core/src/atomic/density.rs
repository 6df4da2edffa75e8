use std::f64::consts::PI;

use super::{clebsch_gordan, RydbergState, WavefunctionTrace};
use crate::{Error, Result};

/// Point in spherical coordinates; `r` in Bohr radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Associated Legendre `P_l^m(x)` for `m ≥ 0` (Condon–Shortley phase).
fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    let mut pmm = 1.0;
    if m > 0 {
        let s = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * s;
            fact += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in m + 2..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// Real and imaginary parts of `Y_lm(θ, φ)`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> (f64, f64) {
    let am = m.unsigned_abs();
    if am > l {
        return (0.0, 0.0);
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI)
        * (ln_factorial(l - am) - ln_factorial(l + am)).exp())
    .sqrt();
    let mut p = norm * assoc_legendre(l, am, theta.cos());
    if m < 0 && am % 2 == 1 {
        p = -p;
    }
    let arg = m as f64 * phi;
    (p * arg.cos(), p * arg.sin())
}

/// Spin-summed probability density `|ψ_{n l j m}|²` in a₀⁻³.
///
/// The fine-structure state is expanded over `|l m_l⟩|s m_s⟩`, so the
/// angular weight is `Σ_{m_s} |⟨l m_l ½ m_s | j m⟩|² |Y_{l m_l}|²`.
pub fn electron_density(trace: &WavefunctionTrace, state: &RydbergState, point: SphericalPoint) -> Result<f64> {
    if trace.l() != state.l() {
        return Err(Error::InvalidArgument(format!(
            "trace has l = {} but state has l = {}",
            trace.l(),
            state.l()
        )));
    }
    let radial = trace.value_at(point.r)?;
    let l = state.l();
    let mut angular = 0.0;
    for ms2 in [-1i32, 1] {
        let ml2 = state.m2() - ms2;
        if ml2.unsigned_abs() > 2 * l {
            continue;
        }
        let cg = clebsch_gordan(2 * l as i64, ml2 as i64, 1, ms2 as i64, state.j2() as i64, state.m2() as i64);
        let (re, im) = spherical_harmonic(l, ml2 / 2, point.theta, point.phi);
        angular += cg * cg * (re * re + im * im);
    }
    Ok(radial * radial * angular)
}
