use std::collections::BTreeMap;

use galqm::spin::{Spin, SpinRepresentation, SPECTRUM_TOLERANCE};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::Header;

const TOLERANCE: f64 = 1e-12;

/// Row-major real and imaginary parts.
#[derive(Debug, Serialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DMatrix<Complex64>> for MatrixJson {
    fn from(m: &DMatrix<Complex64>) -> Self {
        let rows = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

#[derive(Debug, Serialize)]
pub struct SpinRepReport {
    #[serde(flatten)]
    pub header: Header,
    pub j: String,
    pub dim: usize,
    pub hbar: f64,
    pub basis: &'static str,
    pub matrices: BTreeMap<&'static str, MatrixJson>,
    pub checks: BTreeMap<&'static str, f64>,
    pub passed: bool,
}

pub fn parse_spin(j: &str) -> Result<Spin, String> {
    j.parse::<Spin>().map_err(|e| e.to_string())
}

pub fn run(spin: Spin, config: &RunConfig) -> Result<SpinRepReport, String> {
    let hbar = config.grid.hbar;
    let rep = SpinRepresentation::new(spin, hbar).map_err(|e| e.to_string())?;
    let spectrum = rep.spectrum_check().map_err(|e| e.to_string())?;
    let scale = hbar.max(1.0).powi(3);
    let checks = BTreeMap::from([
        ("hermiticity", rep.hermiticity_defect()),
        ("commutation", rep.commutation_defect()),
        ("casimir_commutator", rep.casimir_check()),
        ("casimir_scalar", rep.casimir_scalar_defect()),
        ("spectrum", spectrum.max_deviation),
    ]);
    let passed = checks.iter().all(|(k, v)| if *k == "spectrum" { *v < SPECTRUM_TOLERANCE } else { *v < TOLERANCE * scale });
    let [j1, j2, j3] = rep.components();
    Ok(SpinRepReport {
        header: Header::new("spin-rep", config),
        j: spin.to_string(),
        dim: rep.dim(),
        hbar,
        basis: "m = j, j-1, ..., -j",
        matrices: BTreeMap::from([("J1", j1.into()), ("J2", j2.into()), ("J3", j3.into())]),
        checks,
        passed,
    })
}
