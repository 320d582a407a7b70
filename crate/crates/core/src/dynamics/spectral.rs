use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Unitary-up-to-scaling 1-D DFT pair of a fixed length.
#[derive(Clone)]
pub(crate) struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    /// In place on every length-`n` chunk of `buf`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// In place, including the `1/n` factor.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|x| *x *= s);
    }

    /// `F^-1 diag(symbol) F v`, applied to each length-`n` block of `v`.
    pub fn multiply(&self, v: &[Complex64], symbol: &[Complex64]) -> Vec<Complex64> {
        let mut out = v.to_vec();
        for chunk in out.chunks_mut(self.n) {
            self.forward(chunk);
            chunk.iter_mut().zip(symbol).for_each(|(x, s)| *x *= s);
            self.inverse(chunk);
        }
        out
    }
}

/// 2-D DFT on an `n x n` array stored row-major (x index fastest).
#[derive(Clone)]
pub(crate) struct Spectral2 {
    line: Spectral,
}

impl Spectral2 {
    pub fn new(n: usize) -> Self {
        Self { line: Spectral::new(n) }
    }

    fn transform(&self, buf: &mut [Complex64], forward: bool) {
        let n = self.line.n;
        let run = |c: &mut [Complex64]| if forward { self.line.forward(c) } else { self.line.inverse(c) };
        for row in buf.chunks_mut(n) {
            run(row);
        }
        let mut column = vec![Complex64::new(0.0, 0.0); n];
        for ix in 0..n {
            for iy in 0..n {
                column[iy] = buf[iy * n + ix];
            }
            run(&mut column);
            for iy in 0..n {
                buf[iy * n + ix] = column[iy];
            }
        }
    }

    /// `F^-1 diag(symbol) F v` on each `n²` block of `v`.
    pub fn multiply(&self, v: &[Complex64], symbol: &[Complex64]) -> Vec<Complex64> {
        let nn = self.line.n * self.line.n;
        let mut out = v.to_vec();
        for block in out.chunks_mut(nn) {
            self.transform(block, true);
            block.iter_mut().zip(symbol).for_each(|(x, s)| *x *= s);
            self.transform(block, false);
        }
        out
    }
}
