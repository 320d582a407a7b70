use thiserror::Error;

use crate::sectors::SectorLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("2j must be a nonnegative integer, got j = {0}")]
    InvalidSpin(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense operation on dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("cannot superpose states from sectors {left} and {right}")]
    SectorViolation { left: SectorLabel, right: SectorLabel },

    #[error("simultaneous diagonalization failed (off-diagonal residual {residual:e})")]
    SimultaneousDiagonalization { residual: f64 },

    #[error("exact momentum-space evolution requires a Hamiltonian that is a function of P only")]
    PositionDependentHamiltonian,

    #[error("operation requires a spin-1/2 tensor factor")]
    MissingSpinFactor,

    #[error("probe list is empty")]
    EmptyProbes,

    #[error("linear solve did not converge after {iterations} iterations (residual {residual:e})")]
    SolverDivergence { iterations: usize, residual: f64 },
}
