use num_complex::Complex64;

use super::grid::GridState;
use super::hamiltonian::{GridHamiltonian, SpinTerm};
use super::operators::apply_spin_matrix;
use crate::error::{Error, Result};
use crate::operator::{inner, LinearOperator};

/// Relative residual at which the Crank–Nicolson linear solve stops.
pub const CN_SOLVER_TOLERANCE: f64 = 1e-13;
const CN_ACCEPT_TOLERANCE: f64 = 1e-10;
const CN_MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionMethod {
    /// `exp(-iHt/ħ)` applied in momentum space; needs `H = f(P)` plus a
    /// constant potential and spin term.
    ExactMomentum,
    /// Crank–Nicolson with the smallest number of equal substeps not longer
    /// than `max_step`.
    CrankNicolson { max_step: f64 },
    /// Exact when possible, Crank–Nicolson otherwise.
    Auto { max_step: f64 },
}

impl Default for EvolutionMethod {
    fn default() -> Self {
        EvolutionMethod::Auto { max_step: 0.01 }
    }
}

/// `U(t, t0) = exp(-i H (t - t0)/ħ)` for a time-independent grid Hamiltonian.
#[derive(Clone)]
pub struct EvolutionOperator {
    hamiltonian: GridHamiltonian,
    t0: f64,
    t: f64,
    method: EvolutionMethod,
}

impl EvolutionOperator {
    pub fn new(hamiltonian: &GridHamiltonian, t0: f64, t: f64, method: EvolutionMethod) -> Result<Self> {
        if !t0.is_finite() || !t.is_finite() {
            return Err(Error::InvalidParameter("evolution times must be finite".into()));
        }
        let method = match method {
            EvolutionMethod::ExactMomentum if hamiltonian.momentum_diagonal().is_none() => {
                return Err(Error::PositionDependentHamiltonian)
            }
            EvolutionMethod::CrankNicolson { max_step } | EvolutionMethod::Auto { max_step }
                if !(max_step.is_finite() && max_step > 0.0) =>
            {
                return Err(Error::InvalidParameter(format!("max_step must be positive, got {max_step}")))
            }
            EvolutionMethod::Auto { max_step } => {
                if hamiltonian.momentum_diagonal().is_some() {
                    EvolutionMethod::ExactMomentum
                } else {
                    EvolutionMethod::CrankNicolson { max_step }
                }
            }
            m => m,
        };
        Ok(Self { hamiltonian: hamiltonian.clone(), t0, t, method })
    }

    pub fn duration(&self) -> f64 {
        self.t - self.t0
    }

    /// The resolved method; `Auto` never appears here.
    pub fn method(&self) -> EvolutionMethod {
        self.method
    }

    pub fn apply(&self, state: &GridState) -> Result<GridState> {
        let h = &self.hamiltonian;
        if state.config() != h.config() || state.is_spinor() != h.is_spinor() {
            return Err(Error::DimensionMismatch { expected: h.dim(), found: state.len() });
        }
        let dt = self.duration();
        if dt == 0.0 {
            return Ok(state.clone());
        }
        let amplitudes = match self.method {
            EvolutionMethod::ExactMomentum => exact(h, state.amplitudes(), dt),
            EvolutionMethod::CrankNicolson { max_step } => crank_nicolson(h, state.amplitudes(), dt, max_step)?,
            EvolutionMethod::Auto { .. } => unreachable!("resolved in new"),
        };
        Ok(state.with_amplitudes(amplitudes))
    }
}

/// `U(t) ψ`.
pub fn evolve(state: &GridState, h: &GridHamiltonian, t: f64, method: EvolutionMethod) -> Result<GridState> {
    EvolutionOperator::new(h, 0.0, t, method)?.apply(state)
}

fn exact(h: &GridHamiltonian, psi: &[Complex64], dt: f64) -> Vec<Complex64> {
    let (symbol, spin) = h.momentum_diagonal().expect("checked at construction");
    let hbar = h.config().hbar();
    let phases: Vec<Complex64> = symbol.iter().map(|e| Complex64::from_polar(1.0, -e * dt / hbar)).collect();
    let out = h.spectral().multiply(psi, &phases);
    match spin {
        Some(s) => apply_spin_matrix(&spin_propagator(&s, dt / hbar), &out, h.config().n()),
        None => out,
    }
}

/// `exp(-iθS)` for a Hermitian 2x2 `S = s0 + s·σ`.
pub fn spin_propagator(s: &SpinTerm, theta: f64) -> SpinTerm {
    let s0 = 0.5 * (s[0][0].re + s[1][1].re);
    let (sx, sy, sz) = (s[0][1].re, -s[0][1].im, 0.5 * (s[0][0].re - s[1][1].re));
    let r = (sx * sx + sy * sy + sz * sz).sqrt();
    let global = Complex64::from_polar(1.0, -theta * s0);
    let (c, sn) = ((theta * r).cos(), (theta * r).sin());
    let (nx, ny, nz) = if r > 0.0 { (sx / r, sy / r, sz / r) } else { (0.0, 0.0, 0.0) };
    let i = Complex64::i();
    // cos - i sin (n·σ)
    [
        [global * Complex64::new(c, -sn * nz), global * (-i * sn * Complex64::new(nx, -ny))],
        [global * (-i * sn * Complex64::new(nx, ny)), global * Complex64::new(c, sn * nz)],
    ]
}

fn crank_nicolson(h: &GridHamiltonian, psi: &[Complex64], dt: f64, max_step: f64) -> Result<Vec<Complex64>> {
    // tolerate rounding in durations that are whole multiples of max_step
    let steps = (dt.abs() / max_step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let tau = dt / steps as f64;
    let beta = tau / (2.0 * h.config().hbar());
    let vbar = h.potential().iter().sum::<f64>() / h.potential().len() as f64;
    let precond: Vec<Complex64> = h
        .kinetic_symbol()
        .iter()
        .map(|t| Complex64::new(1.0 / (1.0 + beta * beta * (t + vbar) * (t + vbar)), 0.0))
        .collect();
    let mut state = psi.to_vec();
    for _ in 0..steps {
        state = cn_step(h, &state, beta, &precond)?;
    }
    Ok(state)
}

/// Solves `(I + iβH) x = (I - iβH) ψ` through `(I + β²H²) x = (I - iβH)² ψ`.
fn cn_step(h: &GridHamiltonian, psi: &[Complex64], beta: f64, precond: &[Complex64]) -> Result<Vec<Complex64>> {
    let minus = |v: &[Complex64]| -> Vec<Complex64> {
        let hv = h.apply(v);
        v.iter().zip(hv).map(|(a, b)| a - Complex64::new(0.0, beta) * b).collect()
    };
    let normal = |v: &[Complex64]| -> Vec<Complex64> {
        let hhv = h.apply(&h.apply(v));
        v.iter().zip(hhv).map(|(a, b)| a + b * (beta * beta)).collect()
    };
    let apply_precond = |v: &[Complex64]| h.spectral().multiply(v, precond);

    let b = minus(&minus(psi));
    let b_norm = inner(&b, &b).re.sqrt();
    if b_norm == 0.0 {
        return Ok(b);
    }
    let mut x = apply_precond(&b);
    let ax = normal(&x);
    let mut r: Vec<Complex64> = b.iter().zip(ax).map(|(b, a)| b - a).collect();
    let mut z = apply_precond(&r);
    let mut p = z.clone();
    let mut rz = inner(&r, &z).re;
    let mut residual = inner(&r, &r).re.sqrt() / b_norm;
    for _ in 0..CN_MAX_ITERATIONS {
        if residual <= CN_SOLVER_TOLERANCE {
            return Ok(x);
        }
        let ap = normal(&p);
        let alpha = rz / inner(&p, &ap).re;
        x.iter_mut().zip(&p).for_each(|(x, p)| *x += p * alpha);
        r.iter_mut().zip(&ap).for_each(|(r, a)| *r -= a * alpha);
        residual = inner(&r, &r).re.sqrt() / b_norm;
        z = apply_precond(&r);
        let rz_next = inner(&r, &z).re;
        let gamma = rz_next / rz;
        rz = rz_next;
        p.iter_mut().zip(&z).for_each(|(p, z)| *p = z + *p * gamma);
    }
    if residual <= CN_ACCEPT_TOLERANCE {
        Ok(x)
    } else {
        Err(Error::SolverDivergence { iterations: CN_MAX_ITERATIONS, residual })
    }
}
