//! Grid Schrödinger representation, time evolution and dynamical checks.

mod checks;
mod evolution;
mod grid;
mod hamiltonian;
mod operators;
mod plane;
mod spectral;

pub use checks::{
    commutator_rate, energy_drift, expectation_value, heisenberg_check, position_momentum_uncertainty,
    schrodinger_residual, time_energy_check, variance_value, HeisenbergReport, TimeEnergyReport, STATIONARY_RATE,
};
pub use evolution::{evolve, spin_propagator, EvolutionMethod, EvolutionOperator, CN_SOLVER_TOLERANCE};
pub use grid::{GridConfig, GridState};
pub use hamiltonian::{em_hamiltonian, zeeman_term, EmConvention, EmParameters, GridHamiltonian, SpinTerm};
pub use operators::{
    free_hamiltonian, free_hamiltonian_with_spin, momentum_op, momentum_op_with_spin, position_op,
    position_op_with_spin, spin_matrix, spin_op, DiagonalOperator, FourierMultiplier, SpinMatrixOperator,
};
pub use plane::{
    line_representation, orbital_angular_momentum_z, plane_free_hamiltonian, plane_gaussian, plane_momentum_op,
    plane_position_op, plane_representation, total_angular_momentum_z, PlaneConfig,
};
