use std::sync::Arc;

use num_complex::Complex64;

use super::grid::GridConfig;
use super::operators::apply_spin_matrix;
use super::spectral::Spectral;
use crate::error::{Error, Result};
use crate::operator::{LinearOperator, Observable};

pub type SpinTerm = [[Complex64; 2]; 2];

/// Coefficients used for the scalar potential and the spin coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmConvention {
    /// `(e/c) A0` and `-g_l (ħe/μc) B·σ`.
    #[default]
    AsPrinted,
    /// `e A0` and `-g_l (eħ/4μc) B·σ`, i.e. `-g_l (e/2μc) B·S`.
    Conventional,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmParameters {
    pub charge: f64,
    pub g_l: f64,
    pub c: f64,
    pub convention: EmConvention,
}

impl EmParameters {
    pub fn new(charge: f64, g_l: f64, c: f64) -> Self {
        Self { charge, g_l, c, convention: EmConvention::AsPrinted }
    }

    pub fn with_convention(self, convention: EmConvention) -> Self {
        Self { convention, ..self }
    }

    /// Prefactor of `A0` in the Hamiltonian.
    pub fn scalar_coupling(&self) -> f64 {
        match self.convention {
            EmConvention::AsPrinted => self.charge / self.c,
            EmConvention::Conventional => self.charge,
        }
    }

    /// Prefactor `κ` in `-κ B·σ`.
    pub fn zeeman_coupling(&self, mass: f64, hbar: f64) -> f64 {
        let base = self.g_l * hbar * self.charge / (mass * self.c);
        match self.convention {
            EmConvention::AsPrinted => base,
            EmConvention::Conventional => 0.25 * base,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::InvalidParameter(format!("speed of light must be positive, got {}", self.c)));
        }
        if !self.charge.is_finite() || !self.g_l.is_finite() {
            return Err(Error::InvalidParameter("charge and g_l must be finite".into()));
        }
        Ok(())
    }
}

/// Matrix-free one-dimensional Hamiltonian
/// `(P - a(x))²/2μ + V(x) + S` with `a = (e/c) A_x` and a constant Hermitian
/// spin term `S`.
///
/// A constant `a` is folded into the kinetic symbol, so `H` stays diagonal in
/// momentum whenever `V` is constant as well.
#[derive(Clone)]
pub struct GridHamiltonian {
    config: GridConfig,
    spinor: bool,
    spectral: Spectral,
    kinetic: Vec<f64>,
    momentum: Vec<f64>,
    vector: Option<Vec<f64>>,
    potential: Vec<f64>,
    spin: Option<SpinTerm>,
}

impl GridHamiltonian {
    /// `P²/2μ`, acting on each spin component when `spinor` is set.
    pub fn free(config: GridConfig, spinor: bool) -> Self {
        Self::with_vector_shift(config, spinor, 0.0)
    }

    fn with_vector_shift(config: GridConfig, spinor: bool, shift: f64) -> Self {
        let hbar = config.hbar();
        let momentum: Vec<f64> = config.wavenumbers().into_iter().map(|k| hbar * k).collect();
        let inv = 0.5 / config.mass();
        let kinetic = momentum.iter().map(|p| (p - shift) * (p - shift) * inv).collect();
        Self {
            config,
            spinor,
            spectral: Spectral::new(config.n()),
            kinetic,
            momentum,
            vector: None,
            potential: vec![0.0; config.n()],
            spin: None,
        }
    }

    /// Adds `V(x)` to the scalar potential.
    pub fn with_potential(mut self, v: impl Fn(f64) -> f64) -> Self {
        for (p, x) in self.potential.iter_mut().zip(self.config.positions()) {
            *p += v(x);
        }
        self
    }

    /// Adds a constant Hermitian spin term; requires a spinor Hamiltonian.
    pub fn with_spin_term(mut self, term: SpinTerm) -> Result<Self> {
        if !self.spinor {
            return Err(Error::MissingSpinFactor);
        }
        let defect = (term[0][1] - term[1][0].conj()).norm().max(term[0][0].im.abs()).max(term[1][1].im.abs());
        if defect > 1e-12 * spin_scale(&term).max(1.0) {
            return Err(Error::NotHermitian { deviation: defect });
        }
        self.spin = Some(match self.spin {
            Some(s) => add_spin(&s, &term),
            None => term,
        });
        Ok(self)
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn is_spinor(&self) -> bool {
        self.spinor
    }

    pub fn spin_term(&self) -> Option<&SpinTerm> {
        self.spin.as_ref()
    }

    pub(crate) fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Kinetic symbol `(ħk - a)²/2μ` in FFT order.
    pub fn kinetic_symbol(&self) -> &[f64] {
        &self.kinetic
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// `Some((symbol, spin))` when `H = f(P) ⊗ I + I ⊗ S` with `S` constant.
    pub fn momentum_diagonal(&self) -> Option<(Vec<f64>, Option<SpinTerm>)> {
        if self.vector.is_some() {
            return None;
        }
        let v0 = self.potential[0];
        if self.potential.iter().any(|&v| v != v0) {
            return None;
        }
        Some((self.kinetic.iter().map(|t| t + v0).collect(), self.spin))
    }

    pub fn observable(&self) -> Observable {
        Observable::matrix_free(Arc::new(self.clone()))
    }

    fn components(&self) -> usize {
        if self.spinor {
            2
        } else {
            1
        }
    }

    /// Applies the spin-free part to one `n`-block.
    fn apply_block(&self, block: &[Complex64]) -> Vec<Complex64> {
        let mut k = block.to_vec();
        self.spectral.forward(&mut k);
        let mut kin = k.clone();
        kin.iter_mut().zip(&self.kinetic).for_each(|(x, t)| *x *= t);
        self.spectral.inverse(&mut kin);
        let mut out: Vec<Complex64> =
            kin.iter().zip(block).zip(&self.potential).map(|((t, psi), v)| t + psi * v).collect();
        if let Some(a) = &self.vector {
            // -(P a + a P)/2μ
            let inv = 0.5 / self.config.mass();
            k.iter_mut().zip(&self.momentum).for_each(|(x, p)| *x *= p);
            self.spectral.inverse(&mut k);
            let mut a_psi: Vec<Complex64> = block.iter().zip(a).map(|(psi, a)| psi * a).collect();
            self.spectral.forward(&mut a_psi);
            a_psi.iter_mut().zip(&self.momentum).for_each(|(x, p)| *x *= p);
            self.spectral.inverse(&mut a_psi);
            for (((o, pa), ap), a) in out.iter_mut().zip(&a_psi).zip(&k).zip(a) {
                *o -= (pa + ap * a) * inv;
            }
        }
        out
    }
}

impl LinearOperator for GridHamiltonian {
    fn dim(&self) -> usize {
        self.config.n() * self.components()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.config.n();
        let mut out: Vec<Complex64> = v.chunks(n).flat_map(|b| self.apply_block(b)).collect();
        if let Some(s) = &self.spin {
            for (o, x) in out.iter_mut().zip(apply_spin_matrix(s, v, n)) {
                *o += x;
            }
        }
        out
    }
}

fn spin_scale(s: &SpinTerm) -> f64 {
    s.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

fn add_spin(a: &SpinTerm, b: &SpinTerm) -> SpinTerm {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

/// `-κ B·σ` as a 2x2 matrix.
pub fn zeeman_term(kappa: f64, b: [f64; 3]) -> SpinTerm {
    let s = -kappa;
    [
        [Complex64::new(s * b[2], 0.0), Complex64::new(s * b[0], -s * b[1])],
        [Complex64::new(s * b[0], s * b[1]), Complex64::new(-s * b[2], 0.0)],
    ]
}

/// `(1/2μ)(P - (e/c)A)² + (e/c)A0 - g_l(ħe/μc) B·σ` on the grid.
///
/// Only `A_x` enters the kinetic term on a line; `A_y` and `A_z` contribute
/// `(e/c)²(A_y² + A_z²)/2μ` to the potential. The Pauli term needs a spin
/// factor whenever `B ≠ 0`.
pub fn em_hamiltonian(
    config: GridConfig,
    a0: impl Fn(f64) -> f64,
    a_vec: impl Fn(f64) -> [f64; 3],
    b: [f64; 3],
    params: &EmParameters,
    spinor: bool,
) -> Result<GridHamiltonian> {
    params.validate()?;
    let has_field = b.iter().any(|&x| x != 0.0);
    if has_field && !spinor {
        return Err(Error::MissingSpinFactor);
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("magnetic field must be finite".into()));
    }
    let ec = params.charge / params.c;
    let positions = config.positions();
    let fields: Vec<[f64; 3]> = positions.iter().map(|&x| a_vec(x)).collect();
    let ax: Vec<f64> = fields.iter().map(|a| ec * a[0]).collect();
    let constant_ax = ax.iter().all(|&a| a == ax[0]);

    let mut h = GridHamiltonian::with_vector_shift(config, spinor, if constant_ax { ax[0] } else { 0.0 });
    let inv = 0.5 / config.mass();
    let scalar = params.scalar_coupling();
    for (i, (v, x)) in h.potential.iter_mut().zip(&positions).enumerate() {
        let [_, ay, az] = fields[i];
        *v = scalar * a0(*x) + ec * ec * (ay * ay + az * az) * inv;
        if !constant_ax {
            *v += ax[i] * ax[i] * inv;
        }
    }
    if !constant_ax {
        h.vector = Some(ax);
    }
    if has_field {
        h = h.with_spin_term(zeeman_term(params.zeeman_coupling(config.mass(), config.hbar()), b))?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{free_hamiltonian, free_hamiltonian_with_spin, GridState};
    use crate::hermitian_eigen;
    use crate::operator::{inner, norm};
    use nalgebra::DMatrix;

    fn small() -> GridConfig {
        GridConfig::new(64, 16.0, 1.3, 0.9).unwrap()
    }

    fn zero3(_: f64) -> [f64; 3] {
        [0.0; 3]
    }

    #[test]
    fn free_hamiltonian_examples() {
        let c = small();
        let h = free_hamiltonian(&c);
        let wave = GridState::plane_wave(c, 3);
        let k0 = std::f64::consts::TAU * 3.0 / c.length();
        let e = c.hbar() * c.hbar() * k0 * k0 / (2.0 * c.mass());
        for (a, b) in h.apply(wave.amplitudes()).iter().zip(wave.amplitudes()) {
            assert!((a - b * e).norm() < 1e-12);
        }
        let constant = GridState::plane_wave(c, 0);
        assert!(h.apply(constant.amplitudes()).iter().all(|a| a.norm() < 1e-13));

        let std = GridConfig::standard();
        let (sigma, p0) = (1.1, 0.7);
        let g = GridState::gaussian(std, -0.4, p0, sigma).unwrap();
        let hs = free_hamiltonian(&std);
        let energy = inner(g.amplitudes(), &hs.apply(g.amplitudes())).re * std.dx();
        assert!((energy - (p0 * p0 / 2.0 + 1.0 / (8.0 * sigma * sigma))).abs() < 1e-6);
    }

    #[test]
    fn zero_field_matches_free_on_each_component() {
        let c = small();
        let h = em_hamiltonian(c, |_| 0.0, zero3, [0.0; 3], &EmParameters::new(1.0, 2.0, 137.0), true).unwrap();
        let free = free_hamiltonian_with_spin(&c, true);
        let probe = GridState::gaussian(c, 0.5, 0.3, 1.0)
            .unwrap()
            .with_spinor(Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.7))
            .unwrap();
        let diff: Vec<Complex64> = h
            .apply(probe.amplitudes())
            .iter()
            .zip(free.apply(probe.amplitudes()))
            .map(|(a, b)| a - b)
            .collect();
        assert!(norm(&diff) < 1e-12);
    }

    #[test]
    fn zeeman_splitting_matches_pauli_diagonalization() {
        let c = small();
        let params = EmParameters::new(1.0, 2.0, 3.0);
        let b3 = 0.8;
        let h = em_hamiltonian(c, |_| 0.0, zero3, [0.0, 0.0, b3], &params, true).unwrap();
        let kappa = params.g_l * c.hbar() * params.charge / (c.mass() * params.c);
        for (spin, sign) in [((1.0, 0.0), -1.0), ((0.0, 1.0), 1.0)] {
            let s = GridState::plane_wave(c, 0)
                .with_spinor(Complex64::new(spin.0, 0.0), Complex64::new(spin.1, 0.0))
                .unwrap();
            let hs = h.apply(s.amplitudes());
            for (a, b) in hs.iter().zip(s.amplitudes()) {
                assert!((a - b * (sign * kappa * b3)).norm() < 1e-12);
            }
        }
        // oblique field against a dense 2x2 diagonalization
        let b = [0.3, -0.5, 0.4];
        let term = zeeman_term(kappa, b);
        let m = DMatrix::from_fn(2, 2, |i, j| term[i][j]);
        let (vals, _) = hermitian_eigen(&m).unwrap();
        let bn = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        assert!((vals[0] + kappa * bn).abs() < 1e-12 && (vals[1] - kappa * bn).abs() < 1e-12);
    }

    #[test]
    fn constant_scalar_potential_shifts_spectrum() {
        let c = small();
        let params = EmParameters::new(2.0, 2.0, 5.0);
        let v = 0.75;
        let h = em_hamiltonian(c, |_| v, zero3, [0.0; 3], &params, false).unwrap();
        let wave = GridState::plane_wave(c, -2);
        let k0 = -std::f64::consts::TAU * 2.0 / c.length();
        let e = c.hbar() * c.hbar() * k0 * k0 / (2.0 * c.mass()) + params.charge / params.c * v;
        for (a, b) in h.apply(wave.amplitudes()).iter().zip(wave.amplitudes()) {
            assert!((a - b * e).norm() < 1e-12);
        }
        let conventional = params.with_convention(EmConvention::Conventional);
        assert_eq!(conventional.scalar_coupling(), 2.0);
    }

    #[test]
    fn field_without_spin_factor_is_rejected() {
        let r = em_hamiltonian(small(), |_| 0.0, zero3, [0.0, 0.0, 1.0], &EmParameters::new(1.0, 2.0, 1.0), false);
        assert!(matches!(r, Err(Error::MissingSpinFactor)));
    }

    #[test]
    fn nonconstant_vector_potential_is_hermitian() {
        let c = small();
        let h = em_hamiltonian(
            c,
            |x| 0.1 * x * x,
            |x| [(0.5 * x).sin(), 0.2, 0.0],
            [0.0; 3],
            &EmParameters::new(1.0, 2.0, 1.0),
            false,
        )
        .unwrap();
        assert!(h.momentum_diagonal().is_none());
        let m = h.to_dense().unwrap();
        assert!(crate::operator::hermiticity_defect(&m) < 1e-12 * crate::operator::max_abs(&m));
    }

    #[test]
    fn constant_vector_potential_keeps_momentum_diagonal() {
        let c = small();
        let params = EmParameters::new(1.0, 2.0, 1.0);
        let h = em_hamiltonian(c, |_| 0.0, |_| [0.4, 0.0, 0.0], [0.0; 3], &params, false).unwrap();
        let (symbol, spin) = h.momentum_diagonal().unwrap();
        assert!(spin.is_none());
        assert!((symbol[0] - 0.16 / (2.0 * c.mass())).abs() < 1e-15);
    }
}
