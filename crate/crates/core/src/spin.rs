//! Spin-j matrix representations of the rotation generators.
//!
//! Basis vectors are ordered `m = j, j-1, ..., -j`. Ladder matrix elements use
//! the Condon-Shortley convention, `<m+1|J+|m> = ħ sqrt(j(j+1) - m(m+1)) >= 0`,
//! and `J1 = (J+ + J-)/2`, `J2 = (J+ - J-)/(2i)`. At `j = 1/2` this reproduces
//! `J = (ħ/2) σ` with the standard Pauli matrices, bit for bit when `ħ = 1`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::operator::{commutator_matrix, hermiticity_defect, max_abs};

/// Tolerance on eigenvalues reported by [`SpinRepresentation::spectrum_check`].
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;

/// A spin quantum number, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const ZERO: Spin = Spin { twice: 0 };
    pub const HALF: Spin = Spin { twice: 1 };

    pub fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    /// Accepts any `j` with `2j` a nonnegative integer.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice.is_finite() && twice >= 0.0 && twice.fract() == 0.0 && twice <= u32::MAX as f64) {
            return Err(Error::InvalidSpin(j.to_string()));
        }
        Ok(Self { twice: twice as u32 })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// Every spin from 0 up to and including `self`, in steps of 1/2.
    pub fn sweep(self) -> impl Iterator<Item = Spin> {
        (0..=self.twice).map(Spin::from_twice)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Parses `"3/2"`, `"1"`, or `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpin(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => num.checked_mul(2).map(Spin::from_twice).ok_or_else(bad),
                "2" => Ok(Spin::from_twice(num)),
                _ => Err(bad()),
            }
        } else {
            let j: f64 = s.parse().map_err(|_| bad())?;
            Spin::from_f64(j)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinRepresentation {
    spin: Spin,
    hbar: f64,
    j1: DMatrix<Complex64>,
    j2: DMatrix<Complex64>,
    j3: DMatrix<Complex64>,
}

/// Eigenvalue comparison produced by [`SpinRepresentation::spectrum_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub j3_eigenvalues: Vec<f64>,
    pub casimir_eigenvalues: Vec<f64>,
    pub expected_j3: Vec<f64>,
    pub expected_casimir: f64,
    pub max_deviation: f64,
    pub deviations: Vec<String>,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.deviations.is_empty()
    }
}

impl SpinRepresentation {
    pub fn new(spin: Spin, hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        let dim = spin.dim();
        let tj = spin.twice as i64;
        // 2m for basis index k
        let twice_m = |k: usize| tj - 2 * k as i64;
        let zero = Complex64::new(0.0, 0.0);

        let j3 = DMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::new(hbar * twice_m(r) as f64 / 2.0, 0.0)
            } else {
                zero
            }
        });
        // J+ |m> lives at index k-1 when |m> is at index k.
        let j_plus = DMatrix::from_fn(dim, dim, |r, c| {
            if c >= 1 && r == c - 1 {
                let tm = twice_m(c);
                // 4 (j(j+1) - m(m+1)) = tj(tj+2) - tm(tm+2), exact in integers
                let four_x = tj * (tj + 2) - tm * (tm + 2);
                Complex64::new(hbar * (four_x as f64).sqrt() / 2.0, 0.0)
            } else {
                zero
            }
        });
        let j_minus = j_plus.adjoint();
        let j1 = (&j_plus + &j_minus).map(|x| x * 0.5);
        let j2 = (&j_plus - &j_minus).map(|x| x * Complex64::new(0.0, -0.5));
        Ok(Self { spin, hbar, j1, j2, j3 })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn j1(&self) -> &DMatrix<Complex64> {
        &self.j1
    }

    pub fn j2(&self) -> &DMatrix<Complex64> {
        &self.j2
    }

    pub fn j3(&self) -> &DMatrix<Complex64> {
        &self.j3
    }

    pub fn components(&self) -> [&DMatrix<Complex64>; 3] {
        [&self.j1, &self.j2, &self.j3]
    }

    pub fn j_plus(&self) -> DMatrix<Complex64> {
        &self.j1 + self.j2.map(|x| x * Complex64::new(0.0, 1.0))
    }

    pub fn j_minus(&self) -> DMatrix<Complex64> {
        &self.j1 - self.j2.map(|x| x * Complex64::new(0.0, 1.0))
    }

    /// `J² = J1² + J2² + J3²`.
    pub fn casimir(&self) -> DMatrix<Complex64> {
        &self.j1 * &self.j1 + &self.j2 * &self.j2 + &self.j3 * &self.j3
    }

    /// `max_i |[J², Ji]|` (max-abs entry norm).
    pub fn casimir_check(&self) -> f64 {
        let c = self.casimir();
        self.components()
            .iter()
            .map(|ji| max_abs(&commutator_matrix(&c, ji)))
            .fold(0.0, f64::max)
    }

    /// `max |J² - ħ² j(j+1) I|`.
    pub fn casimir_scalar_defect(&self) -> f64 {
        let j = self.spin.value();
        let target = self.hbar * self.hbar * j * (j + 1.0);
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        max_abs(&(self.casimir() - id.map(|x| x * target)))
    }

    /// `max_i |Ji - Ji^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.components().iter().map(|m| hermiticity_defect(m)).fold(0.0, f64::max)
    }

    /// `max_ij |[Ji, Jj] - iħ ε_ijk Jk|`.
    pub fn commutation_defect(&self) -> f64 {
        let js = self.components();
        let ih = Complex64::new(0.0, self.hbar);
        let cyclic = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
        cyclic
            .iter()
            .map(|&(i, j, k)| max_abs(&(commutator_matrix(js[i], js[j]) - js[k].map(|x| x * ih))))
            .fold(0.0, f64::max)
    }

    /// `max(|[J3, J±] ∓ ħ J±|, |[J+, J-] - 2ħ J3|)`.
    pub fn ladder_defect(&self) -> f64 {
        let (jp, jm) = (self.j_plus(), self.j_minus());
        let h = Complex64::new(self.hbar, 0.0);
        let d1 = max_abs(&(commutator_matrix(&self.j3, &jp) - jp.map(|x| x * h)));
        let d2 = max_abs(&(commutator_matrix(&self.j3, &jm) + jm.map(|x| x * h)));
        let d3 = max_abs(&(commutator_matrix(&jp, &jm) - self.j3.map(|x| x * h * 2.0)));
        d1.max(d2).max(d3)
    }

    /// Compares the numerically computed spectra of `J3` and `J²` with
    /// `{ħm : m = -j..j}` and `ħ² j(j+1)`.
    pub fn spectrum_check(&self) -> Result<SpectrumReport> {
        let (j3_eigenvalues, _) = hermitian_eigen(&self.j3)?;
        let (casimir_eigenvalues, _) = hermitian_eigen(&self.casimir())?;
        let j = self.spin.value();
        let expected_casimir = self.hbar * self.hbar * j * (j + 1.0);
        let expected_j3: Vec<f64> = (0..self.dim())
            .map(|k| self.hbar * (k as f64 - j))
            .collect();

        let mut deviations = Vec::new();
        let mut max_deviation: f64 = 0.0;
        for (got, want) in j3_eigenvalues.iter().zip(&expected_j3) {
            let d = (got - want).abs();
            max_deviation = max_deviation.max(d);
            if d > SPECTRUM_TOLERANCE {
                deviations.push(format!("J3 eigenvalue {got} differs from {want}"));
            }
        }
        for got in &casimir_eigenvalues {
            let d = (got - expected_casimir).abs();
            max_deviation = max_deviation.max(d);
            if d > SPECTRUM_TOLERANCE {
                deviations.push(format!("J² eigenvalue {got} differs from {expected_casimir}"));
            }
        }
        Ok(SpectrumReport {
            j3_eigenvalues,
            casimir_eigenvalues,
            expected_j3,
            expected_casimir,
            max_deviation,
            deviations,
        })
    }
}

/// Builds the spin-`j` representation; fails unless `2j` is a nonnegative integer.
pub fn build_spin_rep(j: f64, hbar: f64) -> Result<SpinRepresentation> {
    SpinRepresentation::new(Spin::from_f64(j)?, hbar)
}

/// The Pauli matrices `σ1, σ2, σ3`.
pub fn pauli_matrices() -> [DMatrix<Complex64>; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_half_is_half_pauli_bit_exact() {
        let rep = build_spin_rep(0.5, 1.0).unwrap();
        for (ji, sigma) in rep.components().iter().zip(pauli_matrices()) {
            assert_eq!(**ji, sigma.map(|x| x * 0.5));
        }
    }

    #[test]
    fn spin_zero_is_trivial() {
        let rep = build_spin_rep(0.0, 1.0).unwrap();
        for ji in rep.components() {
            assert_eq!(ji.shape(), (1, 1));
            assert_eq!(ji[(0, 0)], Complex64::new(0.0, 0.0));
        }
        assert_eq!(rep.casimir_check(), 0.0);
        let report = rep.spectrum_check().unwrap();
        assert_eq!(report.j3_eigenvalues, vec![0.0]);
        assert_eq!(report.casimir_eigenvalues, vec![0.0]);
    }

    #[test]
    fn spin_one_ladder_elements() {
        let hbar = 1.3;
        let rep = build_spin_rep(1.0, hbar).unwrap();
        let diag: Vec<f64> = (0..3).map(|k| rep.j3()[(k, k)].re).collect();
        assert_eq!(diag, vec![hbar, 0.0, -hbar]);
        let jp = rep.j_plus();
        let s2 = hbar * 2f64.sqrt();
        assert!((jp[(0, 1)].re - s2).abs() < 1e-14);
        assert!((jp[(1, 2)].re - s2).abs() < 1e-14);
        assert!(jp[(1, 0)].norm() < 1e-15 && jp[(0, 2)].norm() < 1e-15);
    }

    #[test]
    fn invalid_spin_is_rejected() {
        assert!(matches!(build_spin_rep(0.3, 1.0), Err(Error::InvalidSpin(_))));
        assert!(matches!(build_spin_rep(-0.5, 1.0), Err(Error::InvalidSpin(_))));
        assert!(build_spin_rep(1.0, 0.0).is_err());
        assert_eq!("3/2".parse::<Spin>().unwrap(), Spin::from_twice(3));
        assert_eq!("2".parse::<Spin>().unwrap(), Spin::from_twice(4));
        assert_eq!("2.5".parse::<Spin>().unwrap(), Spin::from_twice(5));
        assert!("1/3".parse::<Spin>().is_err());
        assert!("x".parse::<Spin>().is_err());
        assert_eq!(Spin::from_twice(7).to_string(), "7/2");
    }

    #[test]
    fn casimir_examples() {
        assert!(build_spin_rep(0.5, 1.0).unwrap().casimir_check() < 1e-14);
        let rep = build_spin_rep(4.5, 1.0).unwrap();
        let scale = 4.5 * 5.5;
        assert!(rep.casimir_check() < 1e-12 * scale);
    }

    #[test]
    fn spectrum_examples() {
        let report = build_spin_rep(0.5, 1.0).unwrap().spectrum_check().unwrap();
        assert!(report.passed());
        assert!((report.j3_eigenvalues[0] + 0.5).abs() < 1e-12);
        assert!((report.j3_eigenvalues[1] - 0.5).abs() < 1e-12);

        let report = build_spin_rep(2.0, 1.0).unwrap().spectrum_check().unwrap();
        assert!(report.passed());
        assert_eq!(report.casimir_eigenvalues.len(), 5);
        assert!(report.casimir_eigenvalues.iter().all(|v| (v - 6.0).abs() < 1e-10));
    }

    #[test]
    fn sweep_to_nine_halves() {
        for spin in Spin::from_twice(9).sweep() {
            for hbar in [1.0, 0.7] {
                let rep = SpinRepresentation::new(spin, hbar).unwrap();
                assert!(rep.hermiticity_defect() < 1e-12);
                assert!(rep.commutation_defect() < 1e-12, "{spin}");
                assert!(rep.casimir_scalar_defect() < 1e-12, "{spin}");
                assert!(rep.casimir_check() < 1e-12, "{spin}");
                assert!(rep.ladder_defect() < 1e-12, "{spin}");
                assert!(rep.spectrum_check().unwrap().passed(), "{spin}");
            }
        }
    }
}
