use std::io::Write;

use galqm::dynamics::{
    em_hamiltonian, evolve, expectation_value, momentum_op_with_spin, position_op_with_spin, variance_value, GridState,
};
use serde::Serialize;

use crate::config::{InitialState, RunConfig};
use crate::report::Header;

pub const NORM_TOLERANCE: f64 = 1e-9;
pub const ENERGY_TOLERANCE: f64 = 1e-8;
/// Absolute floor for the energy check when `<H>(0)` vanishes.
const ENERGY_FLOOR: f64 = 1e-12;

pub const CSV_HEADER: [&str; 8] = ["t", "norm", "x_mean", "p_mean", "dx", "dp", "dxdp_product", "energy"];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Row {
    pub t: f64,
    pub norm: f64,
    pub x_mean: f64,
    pub p_mean: f64,
    pub dx: f64,
    pub dp: f64,
    pub dxdp_product: f64,
    pub energy: f64,
}

#[derive(Debug, Serialize)]
pub struct EvolveReport {
    #[serde(flatten)]
    pub header: Header,
    pub method: String,
    pub rows: usize,
    pub max_norm_drift: f64,
    pub max_energy_drift: f64,
    pub passed: bool,
    pub failure: Option<String>,
    pub last: Option<Row>,
}

pub struct Trajectory {
    pub rows: Vec<Row>,
    pub report: EvolveReport,
}

/// Output times `0, dt, 2dt, ...` up to `t_end`, which is always included.
fn output_times(t_end: f64, dt: f64) -> Vec<f64> {
    let whole = (t_end / dt * (1.0 + 1e-12)).floor() as usize;
    let mut times: Vec<f64> = (0..=whole).map(|k| k as f64 * dt).collect();
    if t_end - times[times.len() - 1] > 1e-12 * dt.max(t_end) {
        times.push(t_end);
    } else {
        *times.last_mut().expect("nonempty") = t_end;
    }
    times
}

/// Runs the trajectory; `Err` is a configuration problem.
pub fn run(config: &RunConfig) -> Result<Trajectory, String> {
    config.validate_evolution()?;
    let grid = config.grid_config()?;
    let e = &config.evolution;
    let mut state = match e.initial {
        InitialState::Gaussian { x0, p0, sigma } => GridState::gaussian(grid, x0, p0, sigma).map_err(|e| e.to_string())?,
        InitialState::PlaneWave { mode } => GridState::plane_wave(grid, mode),
    };
    let spinor = config.spinor();
    if let Some((up, down)) = spinor {
        state = state.with_spinor(up, down).map_err(|e| e.to_string())?;
    }
    let em = &config.em;
    let (a0, a_vec) = (em.a0, em.a_vec);
    let mut h = em_hamiltonian(grid, |_| a0, |_| a_vec, em.b, &config.em_parameters(), spinor.is_some())
        .map_err(|e| e.to_string())?;
    if e.harmonic_omega != 0.0 {
        let k = 0.5 * grid.mass() * e.harmonic_omega * e.harmonic_omega;
        h = h.with_potential(|x| k * x * x);
    }
    let method = config.method();
    let resolved = galqm::dynamics::EvolutionOperator::new(&h, 0.0, 0.0, method).map_err(|e| e.to_string())?.method();

    let spin = spinor.is_some();
    let (x, p, hobs) = (position_op_with_spin(&grid, spin), momentum_op_with_spin(&grid, spin), h.observable());
    let measure = |s: &GridState, t: f64| -> Result<Row, String> {
        let f = |r: galqm::Result<f64>| r.map_err(|e| e.to_string());
        let (dx, dp) = (f(variance_value(s, &x))?.sqrt(), f(variance_value(s, &p))?.sqrt());
        Ok(Row {
            t,
            norm: s.norm(),
            x_mean: f(expectation_value(s, &x))?,
            p_mean: f(expectation_value(s, &p))?,
            dx,
            dp,
            dxdp_product: dx * dp,
            energy: f(expectation_value(s, &hobs))?,
        })
    };

    let mut rows = vec![measure(&state, 0.0)?];
    let e0 = rows[0].energy;
    let (mut max_norm_drift, mut max_energy_drift) = ((rows[0].norm - 1.0).abs(), 0.0f64);
    let mut failure = None;
    let times = output_times(e.t_end, e.dt);
    for pair in times.windows(2) {
        state = evolve(&state, &h, pair[1] - pair[0], resolved).map_err(|e| e.to_string())?;
        let row = measure(&state, pair[1])?;
        let norm_drift = (row.norm - 1.0).abs();
        let energy_drift = (row.energy - e0).abs();
        max_norm_drift = max_norm_drift.max(norm_drift);
        max_energy_drift = max_energy_drift.max(energy_drift);
        rows.push(row);
        if norm_drift > NORM_TOLERANCE {
            failure = Some(format!("norm drift {norm_drift:.3e} at t = {}", row.t));
        } else if energy_drift > ENERGY_TOLERANCE * e0.abs() + ENERGY_FLOOR {
            failure = Some(format!("energy drift {energy_drift:.3e} at t = {}", row.t));
        }
        if failure.is_some() {
            break;
        }
    }
    let report = EvolveReport {
        header: Header::new("evolve", config),
        method: format!("{resolved:?}"),
        rows: rows.len(),
        max_norm_drift,
        max_energy_drift,
        passed: failure.is_none(),
        failure,
        last: rows.last().copied(),
    };
    Ok(Trajectory { rows, report })
}

/// Shortest round-trip float formatting keeps the file byte-deterministic.
pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(|e| e.to_string())?;
    for r in rows {
        let fields = [r.t, r.norm, r.x_mean, r.p_mean, r.dx, r.dp, r.dxdp_product, r.energy];
        w.write_record(fields.iter().map(|v| format!("{v:?}"))).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_times_include_the_end() {
        assert_eq!(output_times(0.0, 0.1), vec![0.0]);
        assert_eq!(output_times(0.3, 0.1).len(), 4);
        assert_eq!(*output_times(0.3, 0.1).last().unwrap(), 0.3);
        assert_eq!(output_times(0.25, 0.1), vec![0.0, 0.1, 0.2, 0.25]);
    }
}
