use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::DENSE_DIM_CAP;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and the
/// matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    if n > DENSE_DIM_CAP {
        return Err(Error::DimensionTooLarge { dim: n, cap: DENSE_DIM_CAP });
    }
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Groups sorted eigenvalues whose consecutive gaps are below `rel_gap` times
/// the spectral scale; returns index ranges into the sorted list.
pub fn cluster_sorted(values: &[f64], rel_gap: f64) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > rel_gap * scale {
            if start < i {
                clusters.push(start..i);
            }
            start = i;
        }
    }
    clusters
}
