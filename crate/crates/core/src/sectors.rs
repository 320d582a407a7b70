//! Mass and charge superselection bookkeeping and global gauge phases.
//!
//! Every state carries a [`SectorLabel`]. Coherent superpositions are only
//! formed between states with identical labels; anything else is a
//! [`Error::SectorViolation`]. Charges are integer multiples of a unit charge,
//! so gauge phases wind by whole turns at `θ = 2π`.

use std::fmt;
use std::ops::Range;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::StateVector;

/// Off-diagonal block entries above this magnitude count as sector mixing.
pub const AUDIT_TOLERANCE: f64 = 1e-12;

/// Eigenvalues of the mass and charge operators for a superselection sector.
///
/// Labels compare exactly: two sectors are the same only if their masses are
/// the identical floating point value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorLabel {
    mass: f64,
    charge: i64,
}

impl SectorLabel {
    /// `charge` counts unit charges.
    pub fn new(mass: f64, charge: i64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { mass, charge })
    }

    pub fn neutral(mass: f64) -> Result<Self> {
        Self::new(mass, 0)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }

    pub fn is_neutral(&self) -> bool {
        self.charge == 0
    }

    /// Charge in physical units for a given unit charge.
    pub fn charge_value(&self, unit: f64) -> f64 {
        self.charge as f64 * unit
    }
}

impl Default for SectorLabel {
    fn default() -> Self {
        Self { mass: 1.0, charge: 0 }
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(μ={}, q={}e)", self.mass, self.charge)
    }
}

/// Fails with [`Error::SectorViolation`] unless the labels are identical.
pub fn ensure_same_sector(left: &SectorLabel, right: &SectorLabel) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SectorViolation { left: *left, right: *right })
    }
}

/// `(α s1 + β s2) / |α s1 + β s2|`, only within a single sector.
pub fn superpose(
    s1: &StateVector,
    s2: &StateVector,
    alpha: Complex64,
    beta: Complex64,
) -> Result<StateVector> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch { expected: s1.dim(), found: s2.dim() });
    }
    ensure_same_sector(&s1.sector(), &s2.sector())?;
    let combined = s1.amplitudes() * alpha + s2.amplitudes() * beta;
    StateVector::new(combined, s1.sector()).normalized()
}

/// Phase `e^{iθq}` generated by the charge operator, `q` in unit charges.
pub fn gauge_phase(sector: &SectorLabel, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta * sector.charge() as f64)
}

/// Gauge transformation of the first kind.
pub fn gauge_transform(s: &StateVector, theta: f64) -> StateVector {
    let phase = gauge_phase(&s.sector(), theta);
    StateVector::new(s.amplitudes() * phase, s.sector())
}

/// Contiguous index range of a sector inside a block operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBlock {
    pub sector: SectorLabel,
    pub range: Range<usize>,
}

/// Operator on a direct sum of sectors with declared block layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorOperator {
    pub name: String,
    pub matrix: DMatrix<Complex64>,
    pub blocks: Vec<SectorBlock>,
}

impl SectorOperator {
    /// Checks that the blocks tile `0..dim` in order.
    pub fn new(name: impl Into<String>, matrix: DMatrix<Complex64>, blocks: Vec<SectorBlock>) -> Result<Self> {
        let dim = matrix.nrows();
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.ncols() });
        }
        let mut next = 0;
        for b in &blocks {
            if b.range.start != next || b.range.end < b.range.start {
                return Err(Error::InvalidParameter("sector blocks must tile the index space in order".into()));
            }
            next = b.range.end;
        }
        if next != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: next });
        }
        Ok(Self { name: name.into(), matrix, blocks })
    }

    /// Block-diagonal operator with one block per sector.
    pub fn direct_sum(name: impl Into<String>, parts: Vec<(SectorLabel, DMatrix<Complex64>)>) -> Result<Self> {
        let dim: usize = parts.iter().map(|(_, m)| m.nrows()).sum();
        let mut matrix = DMatrix::zeros(dim, dim);
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (sector, m) in parts {
            let n = m.nrows();
            if !m.is_square() {
                return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
            }
            matrix.view_mut((offset, offset), (n, n)).copy_from(&m);
            blocks.push(SectorBlock { sector, range: offset..offset + n });
            offset += n;
        }
        Self::new(name, matrix, blocks)
    }

    /// Largest entry coupling blocks of different charge.
    pub fn cross_charge_magnitude(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for bi in &self.blocks {
            for bj in &self.blocks {
                if bi.sector.charge() == bj.sector.charge() {
                    continue;
                }
                for r in bi.range.clone() {
                    for c in bj.range.clone() {
                        worst = worst.max(self.matrix[(r, c)].norm());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub name: String,
    pub cross_sector: f64,
    pub violates: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| !e.violates)
    }

    pub fn violations(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| e.violates)
    }
}

/// Checks that no operator connects different charge sectors, which is
/// equivalent to `[Q, A] = 0` for the block-diagonal charge operator.
pub fn charge_commutation_audit(observables: &[SectorOperator]) -> AuditReport {
    let entries = observables
        .iter()
        .map(|op| {
            let cross_sector = op.cross_charge_magnitude();
            AuditEntry { name: op.name.clone(), cross_sector, violates: cross_sector > AUDIT_TOLERANCE }
        })
        .collect();
    AuditReport { entries }
}

/// Operators from this crate's constructors (spin matrices, grid `X`, `P`,
/// free and Pauli Hamiltonians), each lifted block-diagonally over the
/// sectors `(mass, q)` for every `q` in `charges`.
pub fn constructor_suite(mass: f64, hbar: f64, charges: &[i64]) -> Result<Vec<SectorOperator>> {
    use crate::dynamics::{em_hamiltonian, free_hamiltonian, momentum_op, position_op, EmParameters, GridConfig};
    use crate::spin::{Spin, SpinRepresentation};

    let mut named: Vec<(String, DMatrix<Complex64>)> = Vec::new();
    for twice in [1, 2, 3] {
        let rep = SpinRepresentation::new(Spin::from_twice(twice), hbar)?;
        for (i, m) in rep.components().iter().enumerate() {
            named.push((format!("J{}[j={}]", i + 1, Spin::from_twice(twice)), (*m).clone()));
        }
    }
    let grid = GridConfig::new(16, 8.0, mass, hbar)?;
    named.push(("X".into(), position_op(&grid).matrix()?));
    named.push(("P".into(), momentum_op(&grid).matrix()?));
    named.push(("H_free".into(), free_hamiltonian(&grid).matrix()?));
    let pauli = em_hamiltonian(grid, |x| 0.1 * x, |_| [0.2, 0.0, 0.0], [0.0, 0.0, 1.0], &EmParameters::new(1.0, 2.0, 1.0), true)?;
    named.push(("H_pauli".into(), pauli.observable().matrix()?));

    let sectors = charges.iter().map(|&q| SectorLabel::new(mass, q)).collect::<Result<Vec<_>>>()?;
    named
        .into_iter()
        .map(|(name, m)| SectorOperator::direct_sum(name, sectors.iter().map(|s| (*s, m.clone())).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn state(sector: SectorLabel, amps: &[Complex64]) -> StateVector {
        StateVector::new(DVector::from_column_slice(amps), sector)
    }

    #[test]
    fn superpose_within_a_sector() {
        let s = SectorLabel::new(1.0, 0).unwrap();
        let a = state(s, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let b = state(s, &[c(0.0, 0.0), c(1.0, 0.0)]);
        let out = superpose(&a, &b, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(out, a);
        let out = superpose(&a, &b, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-15);
        assert_eq!(out.sector(), s);
    }

    #[test]
    fn superpose_across_sectors_fails() {
        let amps = [c(1.0, 0.0), c(0.0, 0.0)];
        let m1 = state(SectorLabel::new(1.0, 0).unwrap(), &amps);
        let m2 = state(SectorLabel::new(2.0, 0).unwrap(), &amps);
        assert!(matches!(superpose(&m1, &m2, c(1.0, 0.0), c(1.0, 0.0)), Err(Error::SectorViolation { .. })));
        let plus = state(SectorLabel::new(1.0, 1).unwrap(), &amps);
        let minus = state(SectorLabel::new(1.0, -1).unwrap(), &amps);
        assert!(matches!(superpose(&plus, &minus, c(1.0, 0.0), c(1.0, 0.0)), Err(Error::SectorViolation { .. })));
        // a zero coefficient does not make it legal
        assert!(superpose(&plus, &minus, c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn gauge_examples() {
        let s = state(SectorLabel::new(1.0, 2).unwrap(), &[c(0.6, 0.0), c(0.0, 0.8)]);
        assert_eq!(gauge_transform(&s, 0.0), s);
        let turned = gauge_transform(&s, std::f64::consts::PI);
        assert!((turned.amplitudes() - s.amplitudes()).norm() < 1e-15);
        let any = gauge_transform(&s, 1.234);
        assert!((crate::states::Ray::new(any).unwrap().overlap(&crate::states::Ray::new(s).unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_mass_is_rejected() {
        assert!(SectorLabel::new(0.0, 0).is_err());
        assert!(SectorLabel::new(f64::NAN, 0).is_err());
    }

    #[test]
    fn audit_examples() {
        let q0 = SectorLabel::new(1.0, 0).unwrap();
        let q1 = SectorLabel::new(1.0, 1).unwrap();
        let h = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-1.0, 0.0)]);
        let block = SectorOperator::direct_sum("H", vec![(q0, h.clone()), (q1, h.clone())]).unwrap();
        assert!(charge_commutation_audit(std::slice::from_ref(&block)).passed());

        let mut mixed = block.matrix.clone();
        mixed[(0, 3)] = c(0.1, 0.0);
        mixed[(3, 0)] = c(0.1, 0.0);
        let bad = SectorOperator::new("mixer", mixed, block.blocks.clone()).unwrap();
        let report = charge_commutation_audit(&[block, bad]);
        assert!(!report.passed());
        let names: Vec<_> = report.violations().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["mixer"]);
    }

    #[test]
    fn blocks_must_tile() {
        let m = DMatrix::<Complex64>::zeros(3, 3);
        let s = SectorLabel::default();
        let blocks = vec![SectorBlock { sector: s, range: 0..2 }];
        assert!(SectorOperator::new("x", m, blocks).is_err());
    }

    #[test]
    fn library_constructors_pass_the_audit() {
        let suite = constructor_suite(1.0, 1.0, &[-1, 0, 2]).unwrap();
        assert!(suite.len() >= 13);
        let report = charge_commutation_audit(&suite);
        assert!(report.passed());
    }

}
