use std::sync::Arc;

use num_complex::Complex64;

use super::grid::GridConfig;
use super::spectral::Spectral;
use crate::operator::{LinearOperator, Observable};

/// Pointwise multiplication by real values, repeated over spin components.
pub struct DiagonalOperator {
    values: Vec<f64>,
    components: usize,
}

impl DiagonalOperator {
    pub fn new(values: Vec<f64>, components: usize) -> Self {
        Self { values, components }
    }
}

impl LinearOperator for DiagonalOperator {
    fn dim(&self) -> usize {
        self.values.len() * self.components
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.chunks(self.values.len())
            .flat_map(|c| c.iter().zip(&self.values).map(|(x, w)| x * w))
            .collect()
    }
}

/// `F^-1 diag(symbol) F` on each spin component.
pub struct FourierMultiplier {
    spectral: Spectral,
    symbol: Vec<Complex64>,
    components: usize,
}

impl FourierMultiplier {
    pub(crate) fn new(spectral: Spectral, symbol: Vec<Complex64>, components: usize) -> Self {
        Self { spectral, symbol, components }
    }
}

impl LinearOperator for FourierMultiplier {
    fn dim(&self) -> usize {
        self.symbol.len() * self.components
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.spectral.multiply(v, &self.symbol)
    }
}

/// `I_grid ⊗ S` for a 2x2 matrix `S` acting on the spin index.
pub struct SpinMatrixOperator {
    n: usize,
    matrix: [[Complex64; 2]; 2],
}

impl SpinMatrixOperator {
    pub fn new(n: usize, matrix: [[Complex64; 2]; 2]) -> Self {
        Self { n, matrix }
    }
}

impl LinearOperator for SpinMatrixOperator {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        apply_spin_matrix(&self.matrix, v, self.n)
    }
}

pub(crate) fn apply_spin_matrix(m: &[[Complex64; 2]; 2], v: &[Complex64], n: usize) -> Vec<Complex64> {
    let (up, down) = v.split_at(n);
    let mut out = Vec::with_capacity(2 * n);
    out.extend(up.iter().zip(down).map(|(u, d)| m[0][0] * u + m[0][1] * d));
    out.extend(up.iter().zip(down).map(|(u, d)| m[1][0] * u + m[1][1] * d));
    out
}

/// `(ħ/2) σ_i` for `axis` in `0..3`.
pub fn spin_matrix(axis: usize, hbar: f64) -> [[Complex64; 2]; 2] {
    let h = 0.5 * hbar;
    let z = Complex64::new(0.0, 0.0);
    match axis {
        0 => [[z, Complex64::new(h, 0.0)], [Complex64::new(h, 0.0), z]],
        1 => [[z, Complex64::new(0.0, -h)], [Complex64::new(0.0, h), z]],
        2 => [[Complex64::new(h, 0.0), z], [z, Complex64::new(-h, 0.0)]],
        _ => panic!("spin axis must be 0, 1 or 2"),
    }
}

fn components(spinor: bool) -> usize {
    if spinor {
        2
    } else {
        1
    }
}

/// `X ψ(x) = x ψ(x)` on the grid coordinates in `[-L/2, L/2)`.
pub fn position_op(config: &GridConfig) -> Observable {
    position_op_with_spin(config, false)
}

pub fn position_op_with_spin(config: &GridConfig, spinor: bool) -> Observable {
    Observable::matrix_free(Arc::new(DiagonalOperator::new(config.positions(), components(spinor))))
}

/// Spectral momentum `F^-1 ħk F`.
pub fn momentum_op(config: &GridConfig) -> Observable {
    momentum_op_with_spin(config, false)
}

pub fn momentum_op_with_spin(config: &GridConfig, spinor: bool) -> Observable {
    let hbar = config.hbar();
    let symbol = config.wavenumbers().into_iter().map(|k| Complex64::new(hbar * k, 0.0)).collect();
    Observable::matrix_free(Arc::new(FourierMultiplier::new(Spectral::new(config.n()), symbol, components(spinor))))
}

/// `P²/2μ`.
pub fn free_hamiltonian(config: &GridConfig) -> Observable {
    free_hamiltonian_with_spin(config, false)
}

pub fn free_hamiltonian_with_spin(config: &GridConfig, spinor: bool) -> Observable {
    Observable::matrix_free(Arc::new(super::hamiltonian::GridHamiltonian::free(*config, spinor)))
}

/// `(ħ/2) σ_i` acting on the spin factor of a spinor grid state.
pub fn spin_op(config: &GridConfig, axis: usize) -> Observable {
    Observable::matrix_free(Arc::new(SpinMatrixOperator::new(config.n(), spin_matrix(axis, config.hbar()))))
}
