//! Linear operators on finite complex vectors, dense or matrix-free.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension for which dense matrices are formed or diagonalized.
pub const DENSE_DIM_CAP: usize = 512;

/// Tolerance on `|A - A^dagger|` (relative to the largest entry) for dense Hermitian matrices.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A linear map applied to vectors of a fixed length.
pub trait LinearOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// `self * v`; `v.len()` must equal [`LinearOperator::dim`].
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64>;

    /// Materializes the operator column by column.
    fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        if n > DENSE_DIM_CAP {
            return Err(Error::DimensionTooLarge { dim: n, cap: DENSE_DIM_CAP });
        }
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.apply(&e);
            m.column_mut(j).copy_from_slice(&col);
            e[j] = Complex64::new(0.0, 0.0);
        }
        Ok(m)
    }
}

/// Dense matrix acting by matrix-vector product.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Self {
        assert!(matrix.is_square(), "operator matrix must be square");
        Self { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = DVector::from_column_slice(v);
        (&self.matrix * x).as_slice().to_vec()
    }

    fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        Ok(self.matrix.clone())
    }
}

/// `sum_i conj(a_i) b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Max-abs entry of `A - A^dagger`.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn commutator_matrix(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

/// A Hermitian operator: either a checked dense matrix or a matrix-free map the
/// caller vouches for.
#[derive(Clone)]
pub enum Observable {
    Dense(DMatrix<Complex64>),
    MatrixFree(Arc<dyn LinearOperator>),
}

impl Observable {
    /// Wraps a dense matrix after checking Hermiticity.
    pub fn dense(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let deviation = hermiticity_defect(&matrix);
        if deviation > HERMITIAN_TOLERANCE * max_abs(&matrix).max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Observable::Dense(matrix))
    }

    pub fn matrix_free(op: Arc<dyn LinearOperator>) -> Self {
        Observable::MatrixFree(op)
    }

    pub fn dim(&self) -> usize {
        match self {
            Observable::Dense(m) => m.nrows(),
            Observable::MatrixFree(op) => op.dim(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Observable::Dense(m) => (m * DVector::from_column_slice(v)).as_slice().to_vec(),
            Observable::MatrixFree(op) => op.apply(v),
        }
    }

    /// Dense matrix, materializing matrix-free operators up to [`DENSE_DIM_CAP`].
    pub fn matrix(&self) -> Result<DMatrix<Complex64>> {
        match self {
            Observable::Dense(m) => {
                if m.nrows() > DENSE_DIM_CAP {
                    return Err(Error::DimensionTooLarge { dim: m.nrows(), cap: DENSE_DIM_CAP });
                }
                Ok(m.clone())
            }
            Observable::MatrixFree(op) => op.to_dense(),
        }
    }
}

impl LinearOperator for Observable {
    fn dim(&self) -> usize {
        Observable::dim(self)
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        Observable::apply(self, v)
    }
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Dense(m) => f.debug_tuple("Dense").field(&(m.nrows(), m.ncols())).finish(),
            Observable::MatrixFree(op) => f.debug_tuple("MatrixFree").field(&op.dim()).finish(),
        }
    }
}

/// Sum of operators, each scaled by a complex weight.
pub struct LinearCombination {
    dim: usize,
    terms: Vec<(Complex64, Arc<dyn LinearOperator>)>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(Complex64, Arc<dyn LinearOperator>)>) -> Result<Self> {
        let dim = terms.first().map(|(_, op)| op.dim()).unwrap_or(0);
        if let Some((_, bad)) = terms.iter().find(|(_, op)| op.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { dim, terms })
    }
}

impl LinearOperator for LinearCombination {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (w, op) in &self.terms {
            let y = op.apply(v);
            out.iter_mut().zip(y).for_each(|(o, y)| *o += w * y);
        }
        out
    }
}

/// Product `first * second`, applying `second` then `first`.
pub struct Product {
    pub first: Arc<dyn LinearOperator>,
    pub second: Arc<dyn LinearOperator>,
}

impl LinearOperator for Product {
    fn dim(&self) -> usize {
        self.first.dim()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.first.apply(&self.second.apply(v))
    }
}

/// Multiple of the identity.
pub struct ScalarOperator {
    pub dim: usize,
    pub value: Complex64,
}

impl LinearOperator for ScalarOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().map(|x| self.value * x).collect()
    }
}
