use nalgebra::{Complex, Matrix4, SMatrix, SVector};

use super::LadderScheme;
use crate::{Error, Result};

pub type C64 = Complex<f64>;

/// Generator of `dρ/dt = L·vec(ρ)` with column-major `vec` (index `i + 4j`).
pub type Liouvillian = SMatrix<C64, 16, 16>;

type Vec16 = SVector<C64, 16>;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn vec_index(i: usize, j: usize) -> usize {
    i + 4 * j
}

/// Rotating-frame Hamiltonian (ħ = 1, rad/s).
fn hamiltonian(s: &LadderScheme) -> Matrix4<C64> {
    let mut h = Matrix4::zeros();
    h[(1, 1)] = C64::from(-s.detune_probe_rad_s);
    h[(2, 2)] = C64::from(-(s.detune_probe_rad_s + s.detune_coupling_rad_s));
    h[(3, 3)] = C64::from(-(s.detune_probe_rad_s + s.detune_coupling_rad_s + s.detune_rf_rad_s));
    for (a, b, rabi) in [
        (0, 1, s.rabi_probe_rad_s),
        (1, 2, s.rabi_coupling_rad_s),
        (2, 3, s.rabi_rf_rad_s),
    ] {
        h[(a, b)] = C64::from(0.5 * rabi);
        h[(b, a)] = C64::from(0.5 * rabi);
    }
    h
}

fn jump_operators(s: &LadderScheme) -> Vec<Matrix4<C64>> {
    let mut ops = Vec::with_capacity(4);
    for (to, from, rate) in [(0, 1, s.gamma2_rad_s), (1, 2, s.gamma3_rad_s), (2, 3, s.gamma4_rad_s)] {
        if rate > 0.0 {
            let mut c = Matrix4::zeros();
            c[(to, from)] = C64::from(rate.sqrt());
            ops.push(c);
        }
    }
    if s.dephasing_extra_rad_s > 0.0 {
        let mut c = Matrix4::zeros();
        let a = C64::from(s.dephasing_extra_rad_s.sqrt());
        c[(2, 2)] = a;
        c[(3, 3)] = a;
        ops.push(c);
    }
    ops
}

/// Lindblad generator for the ladder scheme, in rad/s.
pub fn liouvillian(scheme: &LadderScheme) -> Liouvillian {
    let h = hamiltonian(scheme);
    let ops = jump_operators(scheme);
    let mut l = Liouvillian::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let row = vec_index(i, j);
            for k in 0..4 {
                // −i H ρ
                l[(row, vec_index(k, j))] -= I * h[(i, k)];
                // +i ρ H
                l[(row, vec_index(i, k))] += I * h[(k, j)];
            }
        }
    }
    for c in &ops {
        let cdc = c.adjoint() * c;
        for i in 0..4 {
            for j in 0..4 {
                let row = vec_index(i, j);
                for k in 0..4 {
                    for m in 0..4 {
                        l[(row, vec_index(k, m))] += c[(i, k)] * c[(j, m)].conj();
                    }
                    l[(row, vec_index(k, j))] -= 0.5 * cdc[(i, k)];
                    l[(row, vec_index(i, k))] -= 0.5 * cdc[(k, j)];
                }
            }
        }
    }
    l
}

/// Four-level density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    pub rho: Matrix4<C64>,
}

impl DensityMatrix4 {
    pub fn ground() -> Self {
        let mut rho = Matrix4::zeros();
        rho[(0, 0)] = C64::from(1.0);
        Self { rho }
    }

    fn from_vec(v: &Vec16) -> Self {
        Self {
            rho: Matrix4::from_fn(|i, j| v[vec_index(i, j)]),
        }
    }

    fn to_vec(self) -> Vec16 {
        Vec16::from_fn(|k, _| self.rho[(k % 4, k / 4)])
    }

    /// `ρ_ij` with 1-based level labels.
    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.rho[(i - 1, j - 1)]
    }

    pub fn population(&self, level: usize) -> f64 {
        self.element(level, level).re
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.rho + self.rho.adjoint()) * C64::from(0.5);
        herm.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix4) -> f64 {
        (self.rho - other.rho).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Null-space steady state of the master equation.
///
/// One population equation is replaced by the trace condition and the
/// resulting linear system is solved by LU on the rate-scaled generator.
pub fn steady_state(scheme: &LadderScheme) -> Result<DensityMatrix4> {
    scheme.validate()?;
    if scheme.gamma2_rad_s == 0.0 && scheme.gamma3_rad_s == 0.0 && scheme.gamma4_rad_s == 0.0 {
        return Err(Error::IllPosed("all decay rates vanish; the steady state is not unique".into()));
    }
    let scale = scheme.rate_scale();
    let l = liouvillian(scheme) / C64::from(scale);
    let mut m = l;
    for k in 0..16 {
        m[(0, k)] = C64::from(0.0);
    }
    for i in 0..4 {
        m[(0, vec_index(i, i))] = C64::from(1.0);
    }
    let mut b = Vec16::zeros();
    b[0] = C64::from(1.0);
    let v = m
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::IllPosed("generator kernel is not one-dimensional".into()))?;
    let residual = (l * v).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(residual < 1e-10) {
        return Err(Error::IllPosed(format!(
            "steady-state residual {residual:e}; kernel is degenerate or ill-conditioned"
        )));
    }
    Ok(DensityMatrix4::from_vec(&v))
}

/// Propagates `rho0` for `t` seconds with the dense matrix exponential.
pub fn propagate(scheme: &LadderScheme, rho0: &DensityMatrix4, t: f64) -> DensityMatrix4 {
    let prop = (liouvillian(scheme) * C64::from(t)).exp();
    DensityMatrix4::from_vec(&(prop * rho0.to_vec()))
}

/// Evolves the ground state from `t = 10/γ₂` onward, doubling the elapsed
/// time by squaring the propagator until the state stops changing.
/// Returns the state and the elapsed time in seconds.
pub fn propagate_to_steady_state(scheme: &LadderScheme) -> Result<(DensityMatrix4, f64)> {
    scheme.validate()?;
    let t0 = 10.0 / if scheme.gamma2_rad_s > 0.0 { scheme.gamma2_rad_s } else { scheme.rate_scale() };
    let mut prop = (liouvillian(scheme) * C64::from(t0)).exp();
    let v0 = DensityMatrix4::ground().to_vec();
    let mut v = prop * v0;
    let mut t = t0;
    for _ in 0..80 {
        prop = prop * prop;
        t *= 2.0;
        let mut next = prop * v0;
        // round-off pulls the unit eigenvalue below one under repeated squaring
        let trace: C64 = (0..4).map(|i| next[vec_index(i, i)]).sum();
        next /= trace;
        let change = (next - v).iter().map(|z| z.norm()).fold(0.0, f64::max);
        v = next;
        if change < 1e-12 {
            return Ok((DensityMatrix4::from_vec(&v), t));
        }
    }
    Err(Error::NumericalFailure("time propagation did not converge".into()))
}
