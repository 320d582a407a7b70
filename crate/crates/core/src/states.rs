//! Finite-dimensional states, rays and the statistics of Hermitian observables.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cluster_sorted, hermitian_eigen};
use crate::operator::{commutator_matrix, hermiticity_defect, inner, max_abs, Observable, HERMITIAN_TOLERANCE};
use crate::sectors::SectorLabel;

/// Allowed deviation of `|ψ|` from one for operations that require a normalized state.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;
/// Rays are equal when the overlap of their representatives is within this of one.
pub const RAY_TOLERANCE: f64 = 1e-12;
/// Relative gap below which eigenvalues count as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;
/// `|[A,B]| <= COMMUTATOR_TOLERANCE |A| |B|` (Frobenius norms) counts as commuting.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-10;

/// State vector tagged with its superselection sector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    sector: SectorLabel,
}

impl StateVector {
    pub fn new(amplitudes: DVector<Complex64>, sector: SectorLabel) -> Self {
        Self { amplitudes, sector }
    }

    pub fn from_slice(amplitudes: &[Complex64], sector: SectorLabel) -> Self {
        Self::new(DVector::from_column_slice(amplitudes), sector)
    }

    /// Unit vector `e_k`.
    pub fn basis(dim: usize, k: usize, sector: SectorLabel) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v, sector)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn sector(&self) -> SectorLabel {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self::new(self.amplitudes.unscale(n), self.sector))
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(())
    }
}

/// A unit vector up to global phase.
#[derive(Debug, Clone)]
pub struct Ray {
    representative: StateVector,
}

impl Ray {
    /// Normalizes the given representative.
    pub fn new(state: StateVector) -> Result<Self> {
        Ok(Self { representative: state.normalized()? })
    }

    pub fn representative(&self) -> &StateVector {
        &self.representative
    }

    /// `|<ψ|φ>|`, clamped into `[0, 1]`.
    pub fn overlap(&self, other: &Ray) -> f64 {
        self.representative.inner(&other.representative).norm().min(1.0)
    }
}

/// Phase-blind: representatives differing only by a global phase compare equal.
impl PartialEq for Ray {
    fn eq(&self, other: &Ray) -> bool {
        self.representative.sector() == other.representative.sector()
            && self.representative.dim() == other.representative.dim()
            && (1.0 - self.overlap(other)) <= RAY_TOLERANCE
    }
}

pub fn ray_overlap(r1: &Ray, r2: &Ray) -> f64 {
    r1.overlap(r2)
}

/// Closed interval of eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBand {
    pub lo: f64,
    pub hi: f64,
}

impl SpectralBand {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// Band around a single eigenvalue.
    pub fn around(value: f64, half_width: f64) -> Self {
        Self { lo: value - half_width, hi: value + half_width }
    }

    pub fn everything() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn check_dim(state: &StateVector, obs: &Observable) -> Result<()> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: obs.dim(), found: state.dim() });
    }
    Ok(())
}

fn dense_hermitian(obs: &Observable) -> Result<DMatrix<Complex64>> {
    let m = obs.matrix()?;
    let deviation = hermiticity_defect(&m);
    if deviation > HERMITIAN_TOLERANCE * max_abs(&m).max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(m)
}

/// Probability that the observable takes a value in `band`.
///
/// Eigenvalues closer than [`DEGENERACY_GAP`] (relative) are treated as one
/// degenerate eigenvalue, their mean deciding membership in the band, and the
/// whole eigenspace projection is summed.
pub fn probability(state: &StateVector, obs: &Observable, band: SpectralBand) -> Result<f64> {
    check_dim(state, obs)?;
    state.ensure_normalized()?;
    let m = dense_hermitian(obs)?;
    let (values, vectors) = hermitian_eigen(&m)?;
    let mut total = 0.0;
    for cluster in cluster_sorted(&values, DEGENERACY_GAP) {
        let mean = values[cluster.clone()].iter().sum::<f64>() / cluster.len() as f64;
        if !band.contains(mean) {
            continue;
        }
        for k in cluster {
            total += vectors.column(k).dotc(state.amplitudes()).norm_sqr();
        }
    }
    Ok(total.min(1.0))
}

/// `<ψ|A|ψ>`; errors if the imaginary part betrays a non-Hermitian operator.
pub fn expectation(state: &StateVector, obs: &Observable) -> Result<f64> {
    check_dim(state, obs)?;
    state.ensure_normalized()?;
    if let Observable::Dense(m) = obs {
        let deviation = hermiticity_defect(m);
        if deviation > HERMITIAN_TOLERANCE * max_abs(m).max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
    }
    let a_psi = obs.apply(state.as_slice());
    expectation_from_image(state.as_slice(), &a_psi)
}

pub(crate) fn expectation_from_image(psi: &[Complex64], a_psi: &[Complex64]) -> Result<f64> {
    let z = inner(psi, a_psi);
    let scale = z.norm().max(crate::operator::norm(a_psi)).max(1.0);
    if z.im.abs() > 1e-10 * scale {
        return Err(Error::NotHermitian { deviation: z.im.abs() });
    }
    Ok(z.re)
}

/// `(ΔA)² = |(A - <A>)ψ|²`, which equals `<A²> - <A>²` for Hermitian `A`.
pub fn variance(state: &StateVector, obs: &Observable) -> Result<f64> {
    let mean = expectation(state, obs)?;
    let a_psi = obs.apply(state.as_slice());
    Ok(centered_norm_sqr(state.as_slice(), &a_psi, mean))
}

pub(crate) fn centered_norm_sqr(psi: &[Complex64], a_psi: &[Complex64], mean: f64) -> f64 {
    a_psi
        .iter()
        .zip(psi)
        .map(|(a, p)| (a - p * mean).norm_sqr())
        .sum()
}

/// Terms of `(ΔA)²(ΔB)² >= <C>²/4` with `[A, B] = iC`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub variance_a: f64,
    pub variance_b: f64,
    /// `<C>` where `C = -i[A, B]`.
    pub commutator_expectation: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl UncertaintyReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }

    pub(crate) fn from_images(psi: &[Complex64], a_psi: &[Complex64], b_psi: &[Complex64]) -> Result<Self> {
        let mean_a = expectation_from_image(psi, a_psi)?;
        let mean_b = expectation_from_image(psi, b_psi)?;
        let variance_a = centered_norm_sqr(psi, a_psi, mean_a);
        let variance_b = centered_norm_sqr(psi, b_psi, mean_b);
        // <-i[A,B]> = -i(<Aψ|Bψ> - <Bψ|Aψ>) = 2 Im <Aψ|Bψ>
        let commutator_expectation = 2.0 * inner(a_psi, b_psi).im;
        let lhs = variance_a * variance_b;
        let rhs = commutator_expectation * commutator_expectation / 4.0;
        Ok(Self { variance_a, variance_b, commutator_expectation, lhs, rhs, slack: lhs - rhs })
    }
}

pub fn uncertainty_bound_check(state: &StateVector, a: &Observable, b: &Observable) -> Result<UncertaintyReport> {
    check_dim(state, a)?;
    check_dim(state, b)?;
    state.ensure_normalized()?;
    let psi = state.as_slice();
    UncertaintyReport::from_images(psi, &a.apply(psi), &b.apply(psi))
}

/// Outcome of [`common_eigenbasis_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct CommonEigenbasis {
    pub commute: bool,
    /// Frobenius norm of `[A, B]`.
    pub commutator_norm: f64,
    /// Columns are simultaneous eigenvectors, present when `commute`.
    pub basis: Option<DMatrix<Complex64>>,
}

/// Decides whether `A` and `B` commute and, if so, diagonalizes them jointly:
/// `A` first, then `B` restricted to each eigenspace of `A`.
pub fn common_eigenbasis_check(a: &Observable, b: &Observable) -> Result<CommonEigenbasis> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let am = dense_hermitian(a)?;
    let bm = dense_hermitian(b)?;
    let commutator_norm = commutator_matrix(&am, &bm).norm();
    let scale = am.norm() * bm.norm();
    if commutator_norm > COMMUTATOR_TOLERANCE * scale {
        return Ok(CommonEigenbasis { commute: false, commutator_norm, basis: None });
    }

    let n = am.nrows();
    let (values, vectors) = hermitian_eigen(&am)?;
    let mut basis = DMatrix::zeros(n, n);
    for cluster in cluster_sorted(&values, DEGENERACY_GAP) {
        let v = vectors.columns(cluster.start, cluster.len()).into_owned();
        let restricted = v.adjoint() * &bm * &v;
        // symmetrize away rounding before the Hermitian solver sees it
        let restricted = (&restricted + restricted.adjoint()).map(|x| x * 0.5);
        let (_, w) = hermitian_eigen(&restricted)?;
        basis.columns_mut(cluster.start, cluster.len()).copy_from(&(v * w));
    }

    let residual = off_diagonal(&(basis.adjoint() * &am * &basis))
        .max(off_diagonal(&(basis.adjoint() * &bm * &basis)));
    let bound = 1e-8 * max_abs(&am).max(max_abs(&bm)).max(1.0);
    if residual > bound {
        return Err(Error::SimultaneousDiagonalization { residual });
    }
    Ok(CommonEigenbasis { commute: true, commutator_norm, basis: Some(basis) })
}

fn off_diagonal(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if r != c {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}
