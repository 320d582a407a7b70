//! The 11-dimensional Lie algebra of the centrally extended Galilei group.
//!
//! Structure constants are exact: every coefficient is a Laurent polynomial in
//! `hbar` whose coefficients are Gaussian rationals, so the Jacobi identity and
//! antisymmetry are checked by equality, not by tolerance. Floating point only
//! enters in [`verify_representation`], which tests a concrete operator
//! assignment against the table.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::operator::{norm, LinearOperator};

/// Basis labels: energy, momenta, boosts, angular momenta and the central mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    H,
    P1,
    P2,
    P3,
    K1,
    K2,
    K3,
    J1,
    J2,
    J3,
    M,
}

impl Generator {
    pub const ALL: [Generator; 11] = [
        Generator::H,
        Generator::P1,
        Generator::P2,
        Generator::P3,
        Generator::K1,
        Generator::K2,
        Generator::K3,
        Generator::J1,
        Generator::J2,
        Generator::J3,
        Generator::M,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::H => "H",
            Generator::P1 => "P1",
            Generator::P2 => "P2",
            Generator::P3 => "P3",
            Generator::K1 => "K1",
            Generator::K2 => "K2",
            Generator::K3 => "K3",
            Generator::J1 => "J1",
            Generator::J2 => "J2",
            Generator::J3 => "J3",
            Generator::M => "M",
        }
    }

    fn momentum(i: usize) -> Generator {
        [Generator::P1, Generator::P2, Generator::P3][i]
    }

    fn boost(i: usize) -> Generator {
        [Generator::K1, Generator::K2, Generator::K3][i]
    }

    fn angular(i: usize) -> Generator {
        [Generator::J1, Generator::J2, Generator::J3][i]
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown generator `{s}`")))
    }
}

pub type GaussianRational = Complex<BigRational>;

fn gaussian(re: i64, im: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Exact coefficient `sum_k c_k hbar^k` with Gaussian-rational `c_k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coefficient {
    terms: BTreeMap<i32, GaussianRational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(gaussian(1, 0), 0)
    }

    /// `i * hbar`, the factor in every nonvanishing structure constant.
    pub fn i_hbar() -> Self {
        Self::monomial(gaussian(0, 1), 1)
    }

    pub fn integer(n: i64) -> Self {
        Self::monomial(gaussian(n, 0), 0)
    }

    pub fn rational(numer: i64, denom: i64) -> Self {
        let r = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        Self::monomial(Complex::new(r, BigRational::zero()), 0)
    }

    pub fn monomial(value: GaussianRational, hbar_power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(hbar_power, value);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(hbar power, coefficient)` pairs in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussianRational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Numerical value at a given `hbar`.
    pub fn evaluate(&self, hbar: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im)) * hbar.powi(*k))
            .sum()
    }

    fn accumulate(&mut self, power: i32, value: GaussianRational) {
        let entry = self.terms.entry(power).or_insert_with(GaussianRational::zero);
        *entry = &*entry + value;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;

    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        Coefficient { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;

    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;

    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.accumulate(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({}", c.re)?;
            if !c.im.is_zero() {
                let sign = if c.im.is_negative() { "-" } else { "+" };
                write!(f, " {} {}i", sign, c.im.abs())?;
            }
            f.write_str(")")?;
            match k {
                0 => {}
                1 => f.write_str("ħ")?,
                _ => write!(f, "ħ^{k}")?,
            }
        }
        Ok(())
    }
}

/// Exact linear combination of the eleven generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    coeffs: BTreeMap<Generator, Coefficient>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(g, Coefficient::one())
    }

    pub fn term(g: Generator, c: Coefficient) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(g, c);
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, g: Generator) -> Coefficient {
        self.coeffs.get(&g).cloned().unwrap_or_default()
    }

    /// Generators with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = (Generator, &Coefficient)> {
        self.coeffs.iter().map(|(g, c)| (*g, c))
    }

    pub fn scale(&self, c: &Coefficient) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g, x) in &self.coeffs {
            out.accumulate(*g, x * c);
        }
        out
    }

    fn accumulate(&mut self, g: Generator, c: Coefficient) {
        let sum = match self.coeffs.get(&g) {
            Some(existing) => existing + &c,
            None => c,
        };
        if sum.is_zero() {
            self.coeffs.remove(&g);
        } else {
            self.coeffs.insert(g, sum);
        }
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (g, c) in &rhs.coeffs {
            out.accumulate(*g, c.clone());
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement { coeffs: self.coeffs.iter().map(|(g, c)| (*g, -c)).collect() }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(g, c)| format!("[{c}]·{g}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Brackets `[A, B]` of basis generators, kept antisymmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    entries: Vec<AlgebraElement>,
}

impl StructureTable {
    /// The table of the centrally extended Galilei algebra:
    ///
    /// ```text
    /// [Ji, Jj] = iħ ε_ijk Jk    [Ji, Kj] = iħ ε_ijk Kk    [Ji, Pj] = iħ ε_ijk Pk
    /// [Ki, H]  = iħ Pi          [Ki, Pj] = iħ δ_ij M
    /// ```
    ///
    /// with every other bracket of basis elements zero.
    pub fn galilei() -> Self {
        let mut table = Self::abelian();
        let ih = Coefficient::i_hbar();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let eps = levi_civita(i, j, k);
                    if eps == 0 {
                        continue;
                    }
                    let c = &ih * &Coefficient::integer(eps);
                    let j_i = Generator::angular(i);
                    table.set(j_i, Generator::angular(j), AlgebraElement::term(Generator::angular(k), c.clone()));
                    table.set(j_i, Generator::boost(j), AlgebraElement::term(Generator::boost(k), c.clone()));
                    table.set(j_i, Generator::momentum(j), AlgebraElement::term(Generator::momentum(k), c));
                }
            }
            table.set(
                Generator::boost(i),
                Generator::H,
                AlgebraElement::term(Generator::momentum(i), ih.clone()),
            );
            table.set(
                Generator::boost(i),
                Generator::momentum(i),
                AlgebraElement::term(Generator::M, ih.clone()),
            );
        }
        table
    }

    /// All brackets zero.
    pub fn abelian() -> Self {
        Self { entries: vec![AlgebraElement::zero(); 121] }
    }

    /// `[a, b]` for basis generators.
    pub fn bracket(&self, a: Generator, b: Generator) -> &AlgebraElement {
        &self.entries[a.index() * 11 + b.index()]
    }

    /// Sets `[a, b] = value` and `[b, a] = -value`.
    ///
    /// Setting a diagonal entry to anything but zero breaks antisymmetry; that
    /// is allowed so the checks can be exercised on corrupted tables.
    pub fn set(&mut self, a: Generator, b: Generator, value: AlgebraElement) {
        self.entries[b.index() * 11 + a.index()] = -&value;
        self.entries[a.index() * 11 + b.index()] = value;
    }

    /// Bilinear extension of the table.
    pub fn commutator(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, ca) in x.support() {
            for (b, cb) in y.support() {
                let br = self.bracket(a, b);
                if br.is_zero() {
                    continue;
                }
                out = &out + &br.scale(&(ca * cb));
            }
        }
        out
    }

    /// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` on basis generators.
    pub fn jacobi_defect(&self, x: Generator, y: Generator, z: Generator) -> AlgebraElement {
        let (ex, ey, ez) = (
            AlgebraElement::generator(x),
            AlgebraElement::generator(y),
            AlgebraElement::generator(z),
        );
        let t1 = self.commutator(&ex, &self.commutator(&ey, &ez));
        let t2 = self.commutator(&ey, &self.commutator(&ez, &ex));
        let t3 = self.commutator(&ez, &self.commutator(&ex, &ey));
        &(&t1 + &t2) + &t3
    }

    /// Triples whose Jacobi sum is not exactly zero.
    pub fn jacobi_failures(&self) -> Vec<(Generator, Generator, Generator, AlgebraElement)> {
        let mut out = Vec::new();
        for x in Generator::ALL {
            for y in Generator::ALL {
                for z in Generator::ALL {
                    let d = self.jacobi_defect(x, y, z);
                    if !d.is_zero() {
                        out.push((x, y, z, d));
                    }
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        Generator::ALL.into_iter().all(|a| {
            Generator::ALL
                .into_iter()
                .all(|b| *self.bracket(a, b) == -self.bracket(b, a))
        })
    }

    pub fn is_central(&self, g: Generator) -> bool {
        Generator::ALL.into_iter().all(|x| self.bracket(g, x).is_zero())
    }
}

impl Default for StructureTable {
    fn default() -> Self {
        Self::galilei()
    }
}

/// Commutator in the Galilei algebra.
pub fn commutator(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    StructureTable::galilei().commutator(x, y)
}

/// Jacobi sum in the Galilei algebra.
pub fn jacobi_defect(x: Generator, y: Generator, z: Generator) -> AlgebraElement {
    StructureTable::galilei().jacobi_defect(x, y, z)
}

/// A concrete assignment of linear operators to (some of) the generators.
#[derive(Clone)]
pub struct Representation {
    hbar: f64,
    operators: BTreeMap<Generator, Arc<dyn LinearOperator>>,
}

impl Representation {
    pub fn new(hbar: f64) -> Self {
        Self { hbar, operators: BTreeMap::new() }
    }

    pub fn with(mut self, g: Generator, op: Arc<dyn LinearOperator>) -> Self {
        self.operators.insert(g, op);
        self
    }

    pub fn insert(&mut self, g: Generator, op: Arc<dyn LinearOperator>) {
        self.operators.insert(g, op);
    }

    pub fn get(&self, g: Generator) -> Option<&Arc<dyn LinearOperator>> {
        self.operators.get(&g)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationStatus {
    Pass,
    Fail,
    /// A generator on either side of the relation has no operator assigned.
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub left: Generator,
    pub right: Generator,
    pub expected: AlgebraElement,
    /// `max_probe |([A,B] - table[A,B]) probe| / |probe|`; zero when skipped.
    pub residual: f64,
    pub status: RelationStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationReport {
    pub tolerance: f64,
    pub relations: Vec<RelationCheck>,
}

impl RepresentationReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.status != RelationStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.relations.iter().filter(|r| r.status == RelationStatus::Fail)
    }

    pub fn checked(&self) -> impl Iterator<Item = &RelationCheck> {
        self.relations.iter().filter(|r| r.status != RelationStatus::Skipped)
    }

    pub fn max_residual(&self) -> f64 {
        self.checked().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Applies both sides of every bracket relation `[A,B] = table[A,B]` (A < B)
/// to the probes and records the worst relative residual.
pub fn verify_representation(
    table: &StructureTable,
    rep: &Representation,
    probes: &[Vec<Complex64>],
    tol: f64,
) -> Result<RepresentationReport> {
    if probes.is_empty() {
        return Err(Error::EmptyProbes);
    }
    if let Some(dim) = rep.operators.values().map(|op| op.dim()).next() {
        if let Some(bad) = rep.operators.values().find(|op| op.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if let Some(bad) = probes.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
    }
    let probe_norms: Vec<f64> = probes.iter().map(|p| norm(p)).collect();
    if probe_norms.contains(&0.0) {
        return Err(Error::ZeroNorm);
    }

    let mut relations = Vec::new();
    for (ia, a) in Generator::ALL.into_iter().enumerate() {
        for b in Generator::ALL.into_iter().skip(ia + 1) {
            let expected = table.bracket(a, b).clone();
            let assigned = [a, b]
                .into_iter()
                .chain(expected.support().map(|(g, _)| g))
                .all(|g| rep.operators.contains_key(&g));
            if !assigned {
                relations.push(RelationCheck { left: a, right: b, expected, residual: 0.0, status: RelationStatus::Skipped });
                continue;
            }
            let (op_a, op_b) = (&rep.operators[&a], &rep.operators[&b]);
            let mut residual: f64 = 0.0;
            for (probe, pn) in probes.iter().zip(&probe_norms) {
                let ab = op_a.apply(&op_b.apply(probe));
                let ba = op_b.apply(&op_a.apply(probe));
                let mut diff: Vec<Complex64> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
                for (g, c) in expected.support() {
                    let value = c.evaluate(rep.hbar);
                    let gp = rep.operators[&g].apply(probe);
                    diff.iter_mut().zip(&gp).for_each(|(d, x)| *d -= value * x);
                }
                residual = residual.max(norm(&diff) / pn);
            }
            let status = if residual <= tol { RelationStatus::Pass } else { RelationStatus::Fail };
            relations.push(RelationCheck { left: a, right: b, expected, residual, status });
        }
    }
    Ok(RepresentationReport { tolerance: tol, relations })
}
