#![allow(dead_code)]

use galqm::dynamics::{GridConfig, GridState};
use num_complex::Complex64;
use rand::Rng;

/// Normalized sum of one to three Gaussian packets centered in the middle
/// quarter of the box, so the tails vanish well inside the boundary.
pub fn random_interior_state<R: Rng + ?Sized>(rng: &mut R, config: GridConfig) -> GridState {
    let half = config.length() / 8.0;
    let packets: Vec<(f64, f64, f64, Complex64)> = (0..rng.random_range(1..=3))
        .map(|_| {
            let x0 = rng.random_range(-half..half);
            let sigma = rng.random_range(0.5..2.0);
            let p0 = rng.random_range(-3.0..3.0);
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (x0, sigma, p0, c)
        })
        .collect();
    let hbar = config.hbar();
    GridState::from_fn(config, |x| {
        packets
            .iter()
            .map(|&(x0, sigma, p0, c)| {
                let d = x - x0;
                c * Complex64::from_polar((-d * d / (4.0 * sigma * sigma)).exp(), p0 * x / hbar)
            })
            .sum()
    })
    .normalized()
    .expect("nonzero packet sum")
}

pub fn random_spinor<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    (c(), c())
}
