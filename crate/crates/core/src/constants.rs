//! CODATA 2018 physical constants (SI) and derived conversion factors.

use std::f64::consts::PI;

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Free-space impedance, Ω.
pub const IMPEDANCE_FREE_SPACE: f64 = 376.730_313_668;

/// Atomic unit of electric dipole moment e·a₀, C·m.
pub const EA0: f64 = ELEMENTARY_CHARGE * BOHR_RADIUS;

/// Wavenumber to frequency: 1 cm⁻¹ in THz.
pub const INVERSE_CM_TO_THZ: f64 = SPEED_OF_LIGHT * 100.0 * 1e-12;

/// Stark coupling of 1 e·a₀ in a field of 1 V/cm, expressed in GHz.
pub const EA0_VCM_TO_GHZ: f64 = EA0 * 100.0 / PLANCK * 1e-9;

/// Field that gives a Rabi frequency of 1 rad/s on a 1 e·a₀ dipole, in V/m.
pub const RAD_PER_S_TO_VM_PER_EA0: f64 = HBAR / EA0;

/// V/m per V/cm.
pub const VM_PER_VCM: f64 = 100.0;
