//! Coulomb-approximation radial wavefunctions by inward Numerov integration.
//!
//! With `r = x²` and `X(x) = r^{-1/4}·u(r)`, `u = r·R`, the radial equation
//! becomes `X'' = g(x)·X` with
//!
//! ```text
//! g(x) = (2l + 1/2)(2l + 3/2)/x² + 8x²·(V(x²) − E),   V(r) = −1/r
//! ```
//!
//! which is integrated on a uniform `x` lattice `x_k = k·h` (a square-root
//! scaled radial grid). Energies are `E = −1/(2n*²)` in atomic units.

use super::energy::effective_n;
use super::{AtomSpecies, RydbergState};
use crate::{Error, Result};

/// Radial grid controls, in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Lattice step in `x = √r`, units of √a₀.
    pub step: f64,
    /// Outer integration radius; defaults to `2n*(n* + 15)`.
    pub outer_radius: Option<f64>,
    /// Smallest radius ever integrated to.
    pub inner_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            step: 0.005,
            outer_radius: None,
            inner_radius: 1e-4,
        }
    }
}

impl GridSpec {
    /// Largest step that still resolves each local de Broglie oscillation
    /// with 20 points. The local wave number in `x` never exceeds `2√2`.
    pub fn max_step() -> f64 {
        2.0 * std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2) / 20.0
    }
}

/// Sampled radial function `R_nl(r)` on a square-root scaled grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTrace {
    radial_grid: Vec<f64>,
    values: Vec<f64>,
    step: f64,
    first_index: usize,
    l: u32,
    n_star: f64,
}

impl WavefunctionTrace {
    /// Radii in Bohr radii, strictly increasing.
    pub fn radial_grid(&self) -> &[f64] {
        &self.radial_grid
    }

    /// `R_nl(r)` in a₀^{-3/2}.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn n_star(&self) -> f64 {
        self.n_star
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.radial_grid[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.radial_grid.last().unwrap()
    }

    /// Lattice index of the first stored point (`x_0 = first_index·step`).
    pub(crate) fn first_index(&self) -> usize {
        self.first_index
    }

    /// `∫ |r·R|² dr` by the trapezoid rule on the stored grid.
    pub fn norm(&self) -> f64 {
        trapezoid(&self.radial_grid, |i| {
            let u = self.radial_grid[i] * self.values[i];
            u * u
        })
    }

    /// Sign changes of `R` away from the grid edges (values below 10⁻⁸ of
    /// the peak are ignored).
    pub fn node_count(&self) -> usize {
        let u: Vec<f64> = self.radial_grid.iter().zip(&self.values).map(|(r, v)| r * v).collect();
        let peak = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let floor = 1e-8 * peak;
        let mut nodes = 0;
        let mut last_sign = 0.0;
        for v in u {
            if v.abs() < floor {
                continue;
            }
            let s = v.signum();
            if last_sign != 0.0 && s != last_sign {
                nodes += 1;
            }
            last_sign = s;
        }
        nodes
    }

    /// Radius of the outermost maximum of `|r·R|²`.
    pub fn outermost_maximum(&self) -> f64 {
        let p: Vec<f64> = self
            .radial_grid
            .iter()
            .zip(&self.values)
            .map(|(r, v)| (r * v).powi(2))
            .collect();
        let peak = p.iter().cloned().fold(0.0, f64::max);
        for i in (1..p.len() - 1).rev() {
            if p[i] >= p[i - 1] && p[i] >= p[i + 1] && p[i] > 1e-3 * peak {
                return self.radial_grid[i];
            }
        }
        self.radial_grid[0]
    }

    /// `R(r)` by four-point Lagrange interpolation in `x = √r`.
    pub fn value_at(&self, r: f64) -> Result<f64> {
        if !(r >= self.r_min() && r <= self.r_max()) {
            return Err(Error::OutOfRange(format!(
                "r = {r} a0 outside wavefunction grid [{}, {}]",
                self.r_min(),
                self.r_max()
            )));
        }
        let x = r.sqrt();
        let pos = x / self.step - self.first_index as f64;
        let n = self.values.len();
        let i0 = (pos.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let xs: Vec<f64> = (i0..i0 + 4).map(|i| self.radial_grid[i].sqrt()).collect();
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (x - xs[b]) / (xs[a] - xs[b]);
                }
            }
            acc += w * self.values[i0 + a];
        }
        Ok(acc)
    }
}

pub(crate) fn trapezoid(grid: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    let mut prev = f(0);
    for i in 1..grid.len() {
        let cur = f(i);
        acc += 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
        prev = cur;
    }
    acc
}

/// Normalized Coulomb-approximation radial wavefunction of `state`.
pub fn radial_wavefunction(
    species: &AtomSpecies,
    state: &RydbergState,
    grid: &GridSpec,
) -> Result<WavefunctionTrace> {
    if state.n() > 200 {
        return Err(Error::InvalidArgument(format!("n = {} exceeds the supported range (200)", state.n())));
    }
    let n_star = effective_n(species, state)?;
    coulomb_wavefunction(n_star, state.l(), grid)
}

/// Integrates the Coulomb radial equation at effective quantum number `n_star`.
pub(crate) fn coulomb_wavefunction(n_star: f64, l: u32, grid: &GridSpec) -> Result<WavefunctionTrace> {
    let h = grid.step;
    if !(h > 0.0 && h <= GridSpec::max_step()) {
        return Err(Error::InvalidArgument(format!(
            "grid step {h} outside (0, {:.4}]",
            GridSpec::max_step()
        )));
    }
    let energy = -0.5 / (n_star * n_star);
    let lf = l as f64;
    let centrifugal = (2.0 * lf + 0.5) * (2.0 * lf + 1.5);
    let r_out = grid.outer_radius.unwrap_or(2.0 * n_star * (n_star + 15.0)).max(30.0);

    // keep 1 − h²g/12 well away from zero near the origin
    let k_floor = (centrifugal / 6.0).sqrt().ceil() as usize + 1;
    let k_min = ((grid.inner_radius.sqrt() / h).ceil() as usize).max(k_floor).max(1);
    let k_max = (r_out.sqrt() / h).ceil() as usize;
    if k_max < k_min + 8 {
        return Err(Error::InvalidArgument("radial grid has too few points".into()));
    }
    let len = k_max - k_min + 1;
    let g = |k: usize| {
        let x = k as f64 * h;
        centrifugal / (x * x) + 8.0 * x * x * (-1.0 / (x * x) - energy)
    };
    let w = |k: usize| 1.0 - h * h * g(k) / 12.0;

    let mut y = vec![0.0_f64; len];
    y[len - 1] = 0.0;
    y[len - 2] = 1e-30;
    for i in (1..len - 1).rev() {
        let k = k_min + i;
        let next = (2.0 * (1.0 + 5.0 * h * h * g(k) / 12.0) * y[i] - w(k + 1) * y[i + 1]) / w(k - 1);
        y[i - 1] = next;
        if next.abs() > 1e100 {
            for v in &mut y[i - 1..] {
                *v *= 1e-100;
            }
        }
    }

    // u = x^{1/2} X
    let xs: Vec<f64> = (0..len).map(|i| (k_min + i) as f64 * h).collect();
    let u: Vec<f64> = xs.iter().zip(&y).map(|(x, v)| x.sqrt() * v).collect();

    // Below the classical inner turning point the non-integer-n* solution
    // turns irregular; cut at the innermost local minimum of |u| there.
    let r_turn = if l == 0 {
        0.0
    } else {
        let disc = 1.0 - lf * (lf + 1.0) / (n_star * n_star);
        n_star * n_star * (1.0 - disc.max(0.0).sqrt())
    };
    let mut start = 0;
    for i in (1..len).rev() {
        let r = xs[i] * xs[i];
        if r >= r_turn {
            continue;
        }
        if u[i - 1].abs() > u[i].abs() {
            start = i;
            break;
        }
    }
    if start + 1 < len && u[start].signum() != u[start + 1].signum() {
        start += 1;
    }

    let radial_grid: Vec<f64> = xs[start..].iter().map(|x| x * x).collect();
    let mut values: Vec<f64> = radial_grid
        .iter()
        .zip(&u[start..])
        .map(|(r, u)| u / r)
        .collect();
    let norm = trapezoid(&radial_grid, |i| (radial_grid[i] * values[i]).powi(2));
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NumericalFailure(format!(
            "wavefunction normalization failed (n* = {n_star}, l = {l}, norm = {norm})"
        )));
    }
    let scale = 1.0 / norm.sqrt();
    values.iter_mut().for_each(|v| *v *= scale);

    Ok(WavefunctionTrace {
        radial_grid,
        values,
        step: h,
        first_index: k_min + start,
        l,
        n_star,
    })
}
