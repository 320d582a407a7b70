//! Executable mathematics for nonrelativistic quantum mechanics built on the
//! Galilei group.
//!
//! - [`group`]: the covering group of the proper Galilei group and the Bargmann
//!   exponent of its physical ray representations.
//! - [`algebra`]: the centrally extended Lie algebra with exact structure
//!   constants, plus a checker for concrete operator representations.
//! - [`spin`]: spin-j matrices built from ladder operators.
//! - [`states`]: states, rays, probabilities, expectation values, uncertainty
//!   relations and joint diagonalization.
//! - [`dynamics`]: grid Schrödinger representation and unitary evolution.
//! - [`sectors`]: mass/charge superselection and gauge phases.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod group;
mod linalg;
pub mod operator;
pub mod sectors;
pub mod spin;
pub mod states;

pub use error::{Error, Result};

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use linalg::hermitian_eigen;
