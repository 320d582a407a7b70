use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::inner;
use crate::sectors::SectorLabel;
use crate::states::StateVector;

/// Uniform periodic grid on `[-L/2, L/2)` for a particle of mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    n: usize,
    length: f64,
    mass: f64,
    hbar: f64,
}

impl GridConfig {
    pub const MIN_POINTS: usize = 16;

    pub fn new(n: usize, length: f64, mass: f64, hbar: f64) -> Result<Self> {
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size must be a power of two >= {}, got {n}",
                Self::MIN_POINTS
            )));
        }
        for (name, value) in [("length", length), ("mass", mass), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(Self { n, length, mass, hbar })
    }

    /// 1024 points on a box of length 40 with unit mass and unit ħ.
    pub fn standard() -> Self {
        Self { n: 1024, length: 40.0, mass: 1.0, hbar: 1.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Discrete wavenumbers in FFT order: `0, 1, ..., n/2-1, -n/2, ..., -1` times `2π/L`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        wavenumbers(self.n, self.length)
    }

    pub fn neutral_sector(&self) -> SectorLabel {
        SectorLabel::neutral(self.mass).expect("grid mass is positive")
    }
}

pub(crate) fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let dk = std::f64::consts::TAU / length;
    (0..n)
        .map(|j| {
            let m = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
            m as f64 * dk
        })
        .collect()
}

/// Wavefunction samples `ψ(x_i)`, optionally tensored with a spin-1/2 factor.
///
/// Spinor amplitudes are stored as two consecutive blocks: the `σ3 = +1`
/// component followed by the `σ3 = -1` component. The norm carries the `dx`
/// quadrature weight.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    amplitudes: Vec<Complex64>,
    config: GridConfig,
    spinor: bool,
    sector: SectorLabel,
}

impl GridState {
    /// The sector mass has to be the grid mass.
    pub fn new(config: GridConfig, amplitudes: Vec<Complex64>, spinor: bool, sector: SectorLabel) -> Result<Self> {
        let expected = config.n * if spinor { 2 } else { 1 };
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: amplitudes.len() });
        }
        if sector.mass() != config.mass {
            return Err(Error::InvalidParameter(format!(
                "sector mass {} differs from grid mass {}",
                sector.mass(),
                config.mass
            )));
        }
        Ok(Self { amplitudes, config, spinor, sector })
    }

    pub fn from_fn(config: GridConfig, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = config.positions().into_iter().map(f).collect();
        Self { amplitudes, config, spinor: false, sector: config.neutral_sector() }
    }

    /// Normalized `exp(-(x-x0)²/(4σ²) + i p0 x/ħ)`, so that `ΔX = σ` and `<P> = p0`.
    pub fn gaussian(config: GridConfig, x0: f64, p0: f64, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        let hbar = config.hbar;
        Self::from_fn(config, |x| {
            let d = x - x0;
            Complex64::from_polar((-d * d / (4.0 * sigma * sigma)).exp(), p0 * x / hbar)
        })
        .normalized()
    }

    /// `exp(i k x)/sqrt(L)` with `k = 2π mode / L`.
    pub fn plane_wave(config: GridConfig, mode: i64) -> Self {
        let k = std::f64::consts::TAU * mode as f64 / config.length;
        let amp = 1.0 / config.length.sqrt();
        Self::from_fn(config, |x| Complex64::from_polar(amp, k * x))
    }

    /// Tensors a scalar state with the spinor `(up, down)` (normalized).
    pub fn with_spinor(self, up: Complex64, down: Complex64) -> Result<Self> {
        if self.spinor {
            return Err(Error::InvalidParameter("state already carries a spin factor".into()));
        }
        let s = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if s == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let (up, down) = (up / s, down / s);
        let mut amplitudes = Vec::with_capacity(2 * self.amplitudes.len());
        amplitudes.extend(self.amplitudes.iter().map(|a| a * up));
        amplitudes.extend(self.amplitudes.iter().map(|a| a * down));
        Ok(Self { amplitudes, spinor: true, ..self })
    }

    /// Relabels the charge; the mass stays the grid mass.
    pub fn with_charge(self, charge: i64) -> Self {
        let sector = SectorLabel::new(self.config.mass, charge).expect("grid mass is positive");
        Self { sector, ..self }
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn is_spinor(&self) -> bool {
        self.spinor
    }

    pub fn sector(&self) -> SectorLabel {
        self.sector
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `sum conj(ψ) φ dx`.
    pub fn inner(&self, other: &GridState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes) * self.config.dx()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.with_amplitudes(self.amplitudes.iter().map(|a| a / n).collect()))
    }

    /// Same grid, spin layout and sector with new amplitudes.
    pub fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), self.amplitudes.len(), "amplitude length must not change");
        Self { amplitudes, config: self.config, spinor: self.spinor, sector: self.sector }
    }

    /// Multiplies by the global phase `e^{iθq}` of the state's charge sector.
    pub fn gauge_transform(&self, theta: f64) -> Self {
        let phase = crate::sectors::gauge_phase(&self.sector, theta);
        self.with_amplitudes(self.amplitudes.iter().map(|a| a * phase).collect())
    }

    /// L2 distance with the `dx` weight.
    pub fn distance(&self, other: &GridState) -> f64 {
        let diff: Vec<Complex64> = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a - b).collect();
        (inner(&diff, &diff).re * self.config.dx()).sqrt()
    }

    /// Euclidean-normalized representative, `ψ_i sqrt(dx)`.
    pub fn to_state_vector(&self) -> StateVector {
        let w = self.config.dx().sqrt();
        let amps: Vec<Complex64> = self.amplitudes.iter().map(|a| a * w).collect();
        StateVector::from_slice(&amps, self.sector)
    }

    /// Probability mass in grid points closer than `margin` to either edge.
    pub fn boundary_weight(&self, margin: usize) -> f64 {
        let n = self.config.n;
        let dx = self.config.dx();
        self.amplitudes
            .chunks(n)
            .flat_map(|c| c.iter().enumerate())
            .filter(|(i, _)| *i < margin || *i >= n - margin)
            .map(|(_, a)| a.norm_sqr() * dx)
            .sum()
    }
}
