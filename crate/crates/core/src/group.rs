//! The proper Galilei group and the exponent of its physical ray representations.
//!
//! An element `g = (tau, a, v, R)` acts on spacetime events as
//!
//! ```text
//! x' = R x + v t + a
//! t' = t + tau
//! ```
//!
//! Rotations are stored as unit quaternions, so an element really lives in the
//! universal covering group: `q` and `-q` project to the same orthogonal matrix
//! but are distinct covering elements. Products multiply quaternions without
//! re-canonicalizing the sign, which keeps the cover faithful.
//!
//! The Bargmann exponent for a system of mass `m` is
//!
//! ```text
//! xi_m(g1, g2) = m/2 * (a1 . R1 v2 - v1 . R1 a2 + tau2 * v1 . R1 v2)
//! ```
//!
//! and satisfies the 2-cocycle identity, see [`cocycle_defect`].

use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance for identities that involve a handful of floating point operations.
pub const GROUP_TOLERANCE: f64 = 1e-12;
/// Tolerance for identities that accumulate rounding over many operations.
pub const ACCUMULATED_TOLERANCE: f64 = 1e-10;

/// Planck's constant. Dimensions are `L^2 M T^-1`; values are in whatever unit
/// system the caller uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { hbar })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}

/// Element of SU(2) stored as a unit quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    q: [f64; 4],
}

impl Rotation {
    pub fn identity() -> Self {
        Self { q: [1.0, 0.0, 0.0, 0.0] }
    }

    /// Builds a rotation from arbitrary (nonzero) quaternion components.
    ///
    /// The quaternion is normalized and its sign fixed so that `w >= 0`, ties
    /// broken by the first nonzero vector component being positive.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("quaternion must be finite and nonzero".into()));
        }
        let mut q = [w / norm, x / norm, y / norm, z / norm];
        let flip = match q.iter().find(|c| **c != 0.0) {
            Some(first) => *first < 0.0,
            None => false,
        };
        if flip {
            q.iter_mut().for_each(|c| *c = -*c);
        }
        Ok(Self { q })
    }

    /// Rotation by `angle` radians about `axis` (right-hand rule).
    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("rotation axis must be nonzero".into()));
        }
        let (s, c) = (0.5 * angle).sin_cos();
        let u = axis / norm;
        Self::from_quaternion(c, s * u.x, s * u.y, s * u.z)
    }

    /// Uniformly distributed rotation (Shoemake's method).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let u3: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        Self::from_quaternion(b * u3.cos(), a * u2.sin(), a * u2.cos(), b * u3.sin())
            .expect("Shoemake sample has unit norm")
    }

    pub fn quaternion(&self) -> [f64; 4] {
        self.q
    }

    pub fn norm(&self) -> f64 {
        self.q.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Hamilton product; `(self * other).matrix() == self.matrix() * other.matrix()`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        let [a0, a1, a2, a3] = self.q;
        let [b0, b1, b2, b3] = other.q;
        Rotation {
            q: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }

    /// Conjugate quaternion, the inverse of a unit quaternion.
    pub fn inverse(&self) -> Rotation {
        let [w, x, y, z] = self.q;
        Rotation { q: [w, -x, -y, -z] }
    }

    /// The SO(3) matrix this covering element projects to.
    pub fn matrix(&self) -> Matrix3<f64> {
        let [w, x, y, z] = self.q;
        Matrix3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        )
    }

    /// Applies the rotation to a vector without forming the matrix.
    pub fn rotate(&self, v: &Vector3<f64>) -> Vector3<f64> {
        let [w, x, y, z] = self.q;
        let u = Vector3::new(x, y, z);
        let t = 2.0 * u.cross(v);
        v + w * t + u.cross(&t)
    }

    /// `max(|R^T R - I|, |det R - 1|)`, zero for an exact rotation.
    pub fn orthogonality_defect(&self) -> f64 {
        let r = self.matrix();
        let gram = (r.transpose() * r - Matrix3::identity()).abs().max();
        gram.max((r.determinant() - 1.0).abs())
    }

    /// Largest entry-wise difference of the projected matrices (ignores the cover).
    pub fn matrix_distance(&self, other: &Rotation) -> f64 {
        (self.matrix() - other.matrix()).abs().max()
    }

    /// Largest component-wise difference of the covering quaternions.
    pub fn cover_distance(&self, other: &Rotation) -> f64 {
        self.q
            .iter()
            .zip(other.q.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

/// A point of Galilean spacetime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeEvent {
    pub x: Vector3<f64>,
    pub t: f64,
}

impl SpacetimeEvent {
    pub fn new(x: Vector3<f64>, t: f64) -> Self {
        Self { x, t }
    }

    pub fn distance(&self, other: &SpacetimeEvent) -> f64 {
        (self.x - other.x).abs().max().max((self.t - other.t).abs())
    }
}

/// Element `(tau, a, v, R)` of the covering group of the proper Galilei group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalileiElement {
    pub tau: f64,
    pub a: Vector3<f64>,
    pub v: Vector3<f64>,
    pub rot: Rotation,
}

impl GalileiElement {
    pub fn new(tau: f64, a: Vector3<f64>, v: Vector3<f64>, rot: Rotation) -> Self {
        Self { tau, a, v, rot }
    }

    pub fn identity() -> Self {
        Self::new(0.0, Vector3::zeros(), Vector3::zeros(), Rotation::identity())
    }

    pub fn time_translation(tau: f64) -> Self {
        Self { tau, ..Self::identity() }
    }

    pub fn translation(a: Vector3<f64>) -> Self {
        Self { a, ..Self::identity() }
    }

    pub fn boost(v: Vector3<f64>) -> Self {
        Self { v, ..Self::identity() }
    }

    pub fn rotation(rot: Rotation) -> Self {
        Self { rot, ..Self::identity() }
    }

    /// Random element with translation, velocity and time shift components
    /// uniform in `[-scale, scale]` and a uniformly distributed rotation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Self {
        let mut comp = || scale * (2.0 * rng.random::<f64>() - 1.0);
        let tau = comp();
        let a = Vector3::new(comp(), comp(), comp());
        let v = Vector3::new(comp(), comp(), comp());
        Self::new(tau, a, v, Rotation::random(rng))
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &GalileiElement) -> GalileiElement {
        GalileiElement {
            tau: self.tau + other.tau,
            a: self.a + self.rot.rotate(&other.a) + other.tau * self.v,
            v: self.v + self.rot.rotate(&other.v),
            rot: self.rot.compose(&other.rot),
        }
    }

    pub fn inverse(&self) -> GalileiElement {
        let rinv = self.rot.inverse();
        GalileiElement {
            tau: -self.tau,
            a: -rinv.rotate(&(self.a - self.tau * self.v)),
            v: -rinv.rotate(&self.v),
            rot: rinv,
        }
    }

    pub fn act(&self, event: &SpacetimeEvent) -> SpacetimeEvent {
        SpacetimeEvent {
            x: self.rot.rotate(&event.x) + event.t * self.v + self.a,
            t: event.t + self.tau,
        }
    }

    /// Largest component-wise difference, comparing rotations as covering elements.
    pub fn distance(&self, other: &GalileiElement) -> f64 {
        let da = (self.a - other.a).abs().max();
        let dv = (self.v - other.v).abs().max();
        (self.tau - other.tau)
            .abs()
            .max(da)
            .max(dv)
            .max(self.rot.cover_distance(&other.rot))
    }

    pub fn approx_eq(&self, other: &GalileiElement, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl Default for GalileiElement {
    fn default() -> Self {
        Self::identity()
    }
}

impl Mul for GalileiElement {
    type Output = GalileiElement;

    fn mul(self, rhs: GalileiElement) -> GalileiElement {
        self.compose(&rhs)
    }
}

impl fmt::Display for GalileiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [w, x, y, z] = self.rot.quaternion();
        write!(
            f,
            "(tau={}, a=[{}, {}, {}], v=[{}, {}, {}], q=[{}, {}, {}, {}])",
            self.tau, self.a.x, self.a.y, self.a.z, self.v.x, self.v.y, self.v.z, w, x, y, z
        )
    }
}

pub fn compose(g1: &GalileiElement, g2: &GalileiElement) -> GalileiElement {
    g1.compose(g2)
}

pub fn inverse(g: &GalileiElement) -> GalileiElement {
    g.inverse()
}

pub fn act(g: &GalileiElement, event: &SpacetimeEvent) -> SpacetimeEvent {
    g.act(event)
}

/// Phase exponent of `U(g1) U(g2) = exp(i xi) U(g1 g2)` in the sector of mass `mass`.
///
/// The unit-mass exponent is multiplied by `mass`; the overall `1/hbar` is left
/// to the caller.
pub fn bargmann_exponent(g1: &GalileiElement, g2: &GalileiElement, mass: f64) -> f64 {
    let r1v2 = g1.rot.rotate(&g2.v);
    let r1a2 = g1.rot.rotate(&g2.a);
    0.5 * mass * (g1.a.dot(&r1v2) - g1.v.dot(&r1a2) + g2.tau * g1.v.dot(&r1v2))
}

/// `xi(g1,g2) + xi(g1 g2, g3) - xi(g2,g3) - xi(g1, g2 g3)`; zero for a 2-cocycle.
pub fn cocycle_defect(
    g1: &GalileiElement,
    g2: &GalileiElement,
    g3: &GalileiElement,
    mass: f64,
) -> f64 {
    bargmann_exponent(g1, g2, mass) + bargmann_exponent(&g1.compose(g2), g3, mass)
        - bargmann_exponent(g2, g3, mass)
        - bargmann_exponent(g1, &g2.compose(g3), mass)
}
