//! Fourier differentiation and 2/3-rule dealiasing on periodic grids, with a
//! finite-difference fallback for non-periodic windows.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::soliton::fd;
use crate::soliton::grid::{Boundary, Field, Grid1D};

/// FFT plans, wavenumbers and the dealiasing mask for one grid size.
pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    keep: Vec<bool>,
}

impl Spectral {
    pub fn new(grid: &Grid1D) -> Self {
        let n = grid.n_points;
        let mut planner = FftPlanner::new();
        let cutoff = (n / 3) as i64;
        let keep = (0..n as i64)
            .map(|j| {
                let j = if j < n as i64 / 2 { j } else { j - n as i64 };
                j.abs() <= cutoff
            })
            .collect();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            k: grid.wavenumbers(),
            keep,
        }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Normalized inverse transform.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spectrum.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
        buf
    }

    /// Zeroes the modes above `n/3`.
    pub fn truncate(&self, spectrum: &mut [Complex64]) {
        for (z, &keep) in spectrum.iter_mut().zip(&self.keep) {
            if !keep {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// `(ik)^order` applied in place. The unmatched Nyquist mode is zeroed
    /// for odd orders so real fields stay real.
    pub fn differentiate(&self, spectrum: &mut [Complex64], order: u32) {
        let nyquist = self.n / 2;
        for (j, (z, &k)) in spectrum.iter_mut().zip(&self.k).enumerate() {
            if order % 2 == 1 && j == nyquist {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= Complex64::new(0.0, k).powu(order);
            }
        }
    }

    /// Spectrum of `P(P(u)^power)`, `P` the 2/3 projection.
    pub fn dealiased_power_spectrum(&self, values: &[Complex64], power: u32, real: bool) -> Vec<Complex64> {
        let mut spec = self.forward(values);
        self.truncate(&mut spec);
        let mut u = self.inverse(&spec);
        if real {
            u.iter_mut().for_each(|z| z.im = 0.0);
        }
        let p: Vec<Complex64> = u.iter().map(|z| z.powu(power)).collect();
        let mut out = self.forward(&p);
        self.truncate(&mut out);
        out
    }
}

fn finish(f: &Field, mut values: Vec<Complex64>) -> Field {
    if f.is_real() {
        values.iter_mut().for_each(|z| z.im = 0.0);
    }
    f.with_values(values)
}

/// Fourier derivative of a periodic field.
pub fn spectral_derivative(f: &Field, order: u32) -> Result<Field> {
    if f.grid.boundary != Boundary::Periodic {
        return Err(Error::InvalidGrid(
            "spectral derivative needs a periodic grid".into(),
        ));
    }
    Ok(spectral_derivative_with(&Spectral::new(&f.grid), f, order))
}

pub(crate) fn spectral_derivative_with(ops: &Spectral, f: &Field, order: u32) -> Field {
    let mut spec = ops.forward(&f.values);
    ops.differentiate(&mut spec, order);
    finish(f, ops.inverse(&spec))
}

/// Spectral on periodic grids, finite differences on windows.
pub fn derivative(f: &Field, order: u32) -> Field {
    match f.grid.boundary {
        Boundary::Periodic => spectral_derivative_with(&Spectral::new(&f.grid), f, order),
        Boundary::Window => finish(f, fd::derivative(&f.values, f.grid.dx(), order)),
    }
}

/// 2/3-rule projection of a periodic field; windows are returned unchanged.
pub fn dealias(f: &Field) -> Field {
    match f.grid.boundary {
        Boundary::Periodic => {
            let ops = Spectral::new(&f.grid);
            let mut spec = ops.forward(&f.values);
            ops.truncate(&mut spec);
            finish(f, ops.inverse(&spec))
        }
        Boundary::Window => f.clone(),
    }
}

/// `f^power`, dealiased on periodic grids and pointwise on windows.
pub fn dealiased_power(f: &Field, power: u32) -> Field {
    match f.grid.boundary {
        Boundary::Periodic => {
            let ops = Spectral::new(&f.grid);
            let spec = ops.dealiased_power_spectrum(&f.values, power, f.is_real());
            finish(f, ops.inverse(&spec))
        }
        Boundary::Window => f.map(|z| z.powu(power)),
    }
}
