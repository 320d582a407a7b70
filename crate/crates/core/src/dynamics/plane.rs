//! Two-dimensional periodic grid used for orbital angular momentum.
//!
//! Amplitudes are stored row-major with `x` fastest (`iy * n + ix`); a spin
//! factor doubles the length with the `σ3 = +1` block first.

use std::sync::Arc;

use num_complex::Complex64;

use super::grid::wavenumbers;
use super::operators::{spin_matrix, DiagonalOperator, SpinMatrixOperator};
use super::spectral::Spectral2;
use crate::algebra::{Generator, Representation};
use crate::error::{Error, Result};
use crate::operator::{LinearCombination, LinearOperator, Observable, Product, ScalarOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneConfig {
    n: usize,
    length: f64,
    mass: f64,
    hbar: f64,
}

impl PlaneConfig {
    pub const MAX_POINTS: usize = 64;

    pub fn new(n: usize, length: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !(16..=Self::MAX_POINTS).contains(&n) || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "plane grid needs a power of two in 16..={} points per axis, got {n}",
                Self::MAX_POINTS
            )));
        }
        for (name, value) in [("length", length), ("mass", mass), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(Self { n, length, mass, hbar })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    /// Number of spatial points, `n²`.
    pub fn points(&self) -> usize {
        self.n * self.n
    }

    fn along(&self, axis: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
        let n = self.n;
        (0..n * n).map(|i| f(if axis == 0 { i % n } else { i / n })).collect()
    }
}

fn components(spinor: bool) -> usize {
    if spinor {
        2
    } else {
        1
    }
}

struct PlaneMultiplier {
    spectral: Spectral2,
    symbol: Vec<Complex64>,
    components: usize,
}

impl LinearOperator for PlaneMultiplier {
    fn dim(&self) -> usize {
        self.symbol.len() * self.components
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.spectral.multiply(v, &self.symbol)
    }
}

fn multiplier(config: &PlaneConfig, spinor: bool, symbol: Vec<f64>) -> Arc<dyn LinearOperator> {
    Arc::new(PlaneMultiplier {
        spectral: Spectral2::new(config.n),
        symbol: symbol.into_iter().map(|s| Complex64::new(s, 0.0)).collect(),
        components: components(spinor),
    })
}

fn check_axis(axis: usize) -> Result<()> {
    if axis > 1 {
        return Err(Error::InvalidParameter(format!("plane axis must be 0 or 1, got {axis}")));
    }
    Ok(())
}

fn position_arc(config: &PlaneConfig, axis: usize, spinor: bool) -> Arc<dyn LinearOperator> {
    Arc::new(DiagonalOperator::new(config.along(axis, |i| config.coordinate(i)), components(spinor)))
}

fn momentum_arc(config: &PlaneConfig, axis: usize, spinor: bool) -> Arc<dyn LinearOperator> {
    let k = wavenumbers(config.n, config.length);
    multiplier(config, spinor, config.along(axis, |i| config.hbar * k[i]))
}

/// `X` (axis 0) or `Y` (axis 1).
pub fn plane_position_op(config: &PlaneConfig, axis: usize, spinor: bool) -> Result<Observable> {
    check_axis(axis)?;
    Ok(Observable::matrix_free(position_arc(config, axis, spinor)))
}

/// Spectral `P_x` (axis 0) or `P_y` (axis 1).
pub fn plane_momentum_op(config: &PlaneConfig, axis: usize, spinor: bool) -> Result<Observable> {
    check_axis(axis)?;
    Ok(Observable::matrix_free(momentum_arc(config, axis, spinor)))
}

/// `(P_x² + P_y²)/2μ`.
pub fn plane_free_hamiltonian(config: &PlaneConfig, spinor: bool) -> Observable {
    Observable::matrix_free(hamiltonian_arc(config, spinor))
}

fn hamiltonian_arc(config: &PlaneConfig, spinor: bool) -> Arc<dyn LinearOperator> {
    let k = wavenumbers(config.n, config.length);
    let n = config.n;
    let c = config.hbar * config.hbar / (2.0 * config.mass);
    let symbol = (0..n * n).map(|i| c * (k[i % n] * k[i % n] + k[i / n] * k[i / n])).collect();
    multiplier(config, spinor, symbol)
}

fn orbital_arc(config: &PlaneConfig, spinor: bool) -> Arc<dyn LinearOperator> {
    let x_py: Arc<dyn LinearOperator> =
        Arc::new(Product { first: position_arc(config, 0, spinor), second: momentum_arc(config, 1, spinor) });
    let y_px: Arc<dyn LinearOperator> =
        Arc::new(Product { first: position_arc(config, 1, spinor), second: momentum_arc(config, 0, spinor) });
    Arc::new(
        LinearCombination::new(vec![(Complex64::new(1.0, 0.0), x_py), (Complex64::new(-1.0, 0.0), y_px)])
            .expect("equal dimensions"),
    )
}

/// `L_z = X P_y - Y P_x`.
pub fn orbital_angular_momentum_z(config: &PlaneConfig, spinor: bool) -> Observable {
    Observable::matrix_free(orbital_arc(config, spinor))
}

fn total_arc(config: &PlaneConfig) -> Arc<dyn LinearOperator> {
    let spin: Arc<dyn LinearOperator> = Arc::new(SpinMatrixOperator::new(config.points(), spin_matrix(2, config.hbar)));
    let one = Complex64::new(1.0, 0.0);
    Arc::new(LinearCombination::new(vec![(one, orbital_arc(config, true)), (one, spin)]).expect("equal dimensions"))
}

/// `J_z = L_z ⊗ I + I ⊗ S_z`; needs the spin factor.
pub fn total_angular_momentum_z(config: &PlaneConfig, spinor: bool) -> Result<Observable> {
    if !spinor {
        return Err(Error::MissingSpinFactor);
    }
    Ok(Observable::matrix_free(total_arc(config)))
}

/// Euclidean-normalized `(x + i y)^m e^{-r²/4σ²}` centered at `center`
/// (`m < 0` uses `x - i y`), optionally tensored with `(up, down)`.
pub fn plane_gaussian(
    config: &PlaneConfig,
    center: [f64; 2],
    sigma: f64,
    m: i32,
    spin: Option<(Complex64, Complex64)>,
) -> Result<Vec<Complex64>> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let n = config.n;
    let sign = if m < 0 { -1.0 } else { 1.0 };
    let orbital: Vec<Complex64> = (0..n * n)
        .map(|i| {
            let x = config.coordinate(i % n) - center[0];
            let y = config.coordinate(i / n) - center[1];
            Complex64::new(x, sign * y).powu(m.unsigned_abs()) * (-(x * x + y * y) / (4.0 * sigma * sigma)).exp()
        })
        .collect();
    let mut amps = match spin {
        None => orbital,
        Some((up, down)) => orbital.iter().map(|a| a * up).chain(orbital.iter().map(|a| a * down)).collect(),
    };
    let norm = crate::operator::norm(&amps);
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    amps.iter_mut().for_each(|a| *a /= norm);
    Ok(amps)
}

/// `H = P²/2μ`, `P1`, `K1 = μX`, `M = μ` on a line.
pub fn line_representation(config: &super::GridConfig) -> Representation {
    let mu = config.mass();
    let x: Arc<dyn LinearOperator> = Arc::new(DiagonalOperator::new(config.positions(), 1));
    let k1: Arc<dyn LinearOperator> =
        Arc::new(LinearCombination::new(vec![(Complex64::new(mu, 0.0), x)]).expect("single term"));
    Representation::new(config.hbar())
        .with(Generator::H, Arc::new(super::GridHamiltonian::free(*config, false)))
        .with(Generator::P1, Arc::new(super::momentum_op(config)))
        .with(Generator::K1, k1)
        .with(Generator::M, Arc::new(ScalarOperator { dim: config.n(), value: Complex64::new(mu, 0.0) }))
}

/// `H`, `P1`, `P2`, `K1 = μX`, `K2 = μY`, `J3 = L_z + S_z`, `M = μ` on the
/// spinor plane.
pub fn plane_representation(config: &PlaneConfig) -> Representation {
    let mu = Complex64::new(config.mass, 0.0);
    let boost = |axis| -> Arc<dyn LinearOperator> {
        Arc::new(LinearCombination::new(vec![(mu, position_arc(config, axis, true))]).expect("single term"))
    };
    Representation::new(config.hbar)
        .with(Generator::H, hamiltonian_arc(config, true))
        .with(Generator::P1, momentum_arc(config, 0, true))
        .with(Generator::P2, momentum_arc(config, 1, true))
        .with(Generator::K1, boost(0))
        .with(Generator::K2, boost(1))
        .with(Generator::J3, total_arc(config))
        .with(Generator::M, Arc::new(ScalarOperator { dim: 2 * config.points(), value: mu }))
}
