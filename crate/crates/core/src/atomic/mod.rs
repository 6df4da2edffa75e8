//! Alkali Rydberg-atom structure from quantum-defect theory.

mod angular;
mod density;
mod dipole;
mod energy;
mod scaling;
mod species;
mod stark;
mod state;
mod wavefunction;

pub use angular::{clebsch_gordan, wigner_3j, wigner_6j, z_angular_factor};
pub use density::{electron_density, spherical_harmonic, SphericalPoint};
pub use dipole::{radial_matrix_element, radial_overlap_integral, z_matrix_element};
pub use energy::{level_energy, transition_frequency};
pub use scaling::{scaling_property, scaling_property_at, ScalingProperty, ScaledValue};
pub use species::{AtomSpecies, D2Line, QuantumDefect, ScalingConstants, SpeciesName};
pub use stark::{
    polarizability, polarizability_perturbative, stark_map, StarkBasisSpec, StarkHamiltonian,
    StarkMap,
};
pub use state::{allowed_transition, RydbergState};
pub use wavefunction::{radial_wavefunction, GridSpec, WavefunctionTrace};
