use num_complex::Complex64;

use super::evolution::{evolve, EvolutionMethod};
use super::grid::GridState;
use super::hamiltonian::GridHamiltonian;
use super::operators::{momentum_op_with_spin, position_op_with_spin};
use crate::error::{Error, Result};
use crate::operator::{inner, norm, LinearOperator, Observable};
use crate::states::UncertaintyReport;

/// Rates below this are treated as zero by [`time_energy_check`].
pub const STATIONARY_RATE: f64 = 1e-12;

fn check_dim(state: &GridState, dim: usize) -> Result<()> {
    if state.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: state.len() });
    }
    Ok(())
}

fn unit_vector(state: &GridState) -> Result<Vec<Complex64>> {
    let n = norm(state.amplitudes());
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroNorm);
    }
    Ok(state.amplitudes().iter().map(|a| a / n).collect())
}

/// `<A>` in the normalized state.
pub fn expectation_value(state: &GridState, a: &Observable) -> Result<f64> {
    check_dim(state, a.dim())?;
    let psi = unit_vector(state)?;
    crate::states::expectation_from_image(&psi, &a.apply(&psi))
}

/// `(ΔA)²` in the normalized state.
pub fn variance_value(state: &GridState, a: &Observable) -> Result<f64> {
    check_dim(state, a.dim())?;
    let psi = unit_vector(state)?;
    let a_psi = a.apply(&psi);
    let mean = crate::states::expectation_from_image(&psi, &a_psi)?;
    Ok(crate::states::centered_norm_sqr(&psi, &a_psi, mean))
}

/// Robertson terms for grid `X` and `P`; `ΔX ΔP = sqrt(lhs)`.
pub fn position_momentum_uncertainty(state: &GridState) -> Result<UncertaintyReport> {
    let psi = unit_vector(state)?;
    let c = state.config();
    let x = position_op_with_spin(c, state.is_spinor());
    let p = momentum_op_with_spin(c, state.is_spinor());
    UncertaintyReport::from_images(&psi, &x.apply(&psi), &p.apply(&psi))
}

/// `|Hψ - iħ (ψ(dt) - ψ(-dt))/(2dt)| / |Hψ|`.
///
/// Falls back to the absolute residual when `Hψ = 0`.
pub fn schrodinger_residual(state: &GridState, h: &GridHamiltonian, dt: f64, method: EvolutionMethod) -> Result<f64> {
    check_dim(state, h.dim())?;
    if norm(state.amplitudes()) == 0.0 {
        return Err(Error::ZeroNorm);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let forward = evolve(state, h, dt, method)?;
    let backward = evolve(state, h, -dt, method)?;
    let h_psi = h.apply(state.amplitudes());
    let scale = Complex64::new(0.0, h.config().hbar() / (2.0 * dt));
    let diff: Vec<Complex64> = h_psi
        .iter()
        .zip(forward.amplitudes().iter().zip(backward.amplitudes()))
        .map(|(hp, (f, b))| hp - scale * (f - b))
        .collect();
    let denom = norm(&h_psi);
    let residual = norm(&diff);
    Ok(if denom > 0.0 { residual / denom } else { residual })
}

/// `d<A>/dt = (i/ħ)<[H, A]> = -(2/ħ) Im <Hψ|Aψ>` for unit `ψ`.
pub fn commutator_rate(state: &GridState, h: &GridHamiltonian, a: &Observable) -> Result<f64> {
    check_dim(state, h.dim())?;
    check_dim(state, a.dim())?;
    let psi = unit_vector(state)?;
    let h_psi = h.apply(&psi);
    let a_psi = a.apply(&psi);
    Ok(-2.0 / h.config().hbar() * inner(&h_psi, &a_psi).im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergReport {
    /// `(<A>(t+dt) - <A>(t-dt)) / 2dt`.
    pub finite_difference: f64,
    /// `(i/ħ)<[H, A]>` at time `t`.
    pub commutator_rate: f64,
    pub discrepancy: f64,
}

/// Compares the finite-difference rate of `<A>` along `ψ(t)` with the
/// Heisenberg rate.
pub fn heisenberg_check(
    state: &GridState,
    h: &GridHamiltonian,
    a: &Observable,
    t: f64,
    dt: f64,
    method: EvolutionMethod,
) -> Result<HeisenbergReport> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let at_t = evolve(state, h, t, method)?;
    let plus = expectation_value(&evolve(&at_t, h, dt, method)?, a)?;
    let minus = expectation_value(&evolve(&at_t, h, -dt, method)?, a)?;
    let finite_difference = (plus - minus) / (2.0 * dt);
    let commutator_rate = commutator_rate(&at_t, h, a)?;
    Ok(HeisenbergReport { finite_difference, commutator_rate, discrepancy: (finite_difference - commutator_rate).abs() })
}

/// `|<H>(t) - <H>(0)| / |<H>(0)|` (absolute when `<H>(0) = 0`).
pub fn energy_drift(state: &GridState, h: &GridHamiltonian, t: f64, method: EvolutionMethod) -> Result<f64> {
    let obs = h.observable();
    let e0 = expectation_value(state, &obs)?;
    let e1 = expectation_value(&evolve(state, h, t, method)?, &obs)?;
    let d = (e1 - e0).abs();
    Ok(if e0 != 0.0 { d / e0.abs() } else { d })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeEnergyReport {
    pub delta_h: f64,
    pub delta_a: f64,
    /// Heisenberg rate `(i/ħ)<[H, A]>`.
    pub rate: f64,
    /// Central-difference rate over `±dt`.
    pub finite_difference_rate: f64,
    /// `ΔA / |d<A>/dt|`; infinite for stationary `<A>`.
    pub tau: f64,
    /// `ΔH τ_A - ħ/2`; infinite for stationary `<A>`.
    pub slack: f64,
}

impl TimeEnergyReport {
    pub fn is_stationary(&self) -> bool {
        self.tau.is_infinite()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// `ΔH τ_A >= ħ/2` with `τ_A = ΔA / |d<A>/dt|`.
pub fn time_energy_check(
    state: &GridState,
    h: &GridHamiltonian,
    a: &Observable,
    dt: f64,
    method: EvolutionMethod,
) -> Result<TimeEnergyReport> {
    let report = heisenberg_check(state, h, a, 0.0, dt, method)?;
    let delta_h = variance_value(state, &h.observable())?.sqrt();
    let delta_a = variance_value(state, a)?.sqrt();
    let rate = report.commutator_rate;
    let (tau, slack) = if rate.abs() < STATIONARY_RATE {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let tau = delta_a / rate.abs();
        (tau, delta_h * tau - 0.5 * h.config().hbar())
    };
    Ok(TimeEnergyReport { delta_h, delta_a, rate, finite_difference_rate: report.finite_difference, tau, slack })
}
