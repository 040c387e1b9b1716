use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// How derivatives treat the ends of the sample window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Samples are one period; derivatives are spectral.
    Periodic,
    /// A one-shot window of ℝ; derivatives use high-order finite differences.
    Window,
}

/// Uniform grid `x_j = x_min + j·dx`, `dx = L/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n_points: usize,
    pub length: f64,
    pub x_min: f64,
    pub boundary: Boundary,
}

impl Grid1D {
    /// Periodic grid on `[−L/2, L/2)`; `n` must be a power of two.
    pub fn periodic(n_points: usize, length: f64) -> Result<Self> {
        if !n_points.is_power_of_two() || n_points < 4 {
            return Err(Error::InvalidGrid(format!(
                "n_points = {n_points} must be a power of two >= 4"
            )));
        }
        Self::checked(n_points, length, -length / 2.0, Boundary::Periodic)
    }

    /// Non-periodic window `[x_min, x_min + L)` with `n` samples.
    pub fn window(n_points: usize, x_min: f64, length: f64) -> Result<Self> {
        if n_points < 16 {
            return Err(Error::InvalidGrid(format!(
                "window needs at least 16 points, got {n_points}"
            )));
        }
        Self::checked(n_points, length, x_min, Boundary::Window)
    }

    fn checked(n_points: usize, length: f64, x_min: f64, boundary: Boundary) -> Result<Self> {
        if !(length > 0.0 && length.is_finite() && x_min.is_finite()) {
            return Err(Error::InvalidGrid(format!("length {length} / origin {x_min}")));
        }
        Ok(Self {
            n_points,
            length,
            x_min,
            boundary,
        })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Wavenumbers in FFT order: `0, 1, …, n/2−1, −n/2, …, −1` times `2π/L`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let base = 2.0 * PI / self.length;
        (0..n)
            .map(|j| if j < n / 2 { j } else { j - n })
            .map(|j| j as f64 * base)
            .collect()
    }

    /// Largest wavenumber kept by the 2/3 rule.
    pub fn dealiased_kmax(&self) -> f64 {
        (self.n_points / 3) as f64 * 2.0 * PI / self.length
    }
}

pub(crate) fn max_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, |m, x| if x.is_nan() || x > m { x } else { m })
}

/// Samples of a (possibly complex) function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::DimensionMismatch {
                expected: grid.n_points,
                found: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().into_iter().map(|x| Complex64::new(f(x), 0.0)).collect();
        Self { grid, values }
    }

    pub fn from_complex_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid1D, value: f64) -> Self {
        Self::from_fn(grid, |_| value)
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>) -> Self {
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    /// Drops imaginary parts.
    pub fn real_part(&self) -> Self {
        self.with_values(self.values.iter().map(|z| Complex64::new(z.re, 0.0)).collect())
    }

    /// `max_j |f_j|`; NaN if any sample is NaN.
    pub fn max_abs(&self) -> f64 {
        max_norm(&self.values)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        self.with_values(self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        debug_assert_eq!(self.grid.n_points, other.grid.n_points);
        self.with_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn add(&self, other: &Field) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    /// `max_j |a_j − b_j|`
    pub fn linf_distance(&self, other: &Field) -> f64 {
        self.sub(other).max_abs()
    }

    /// Discrete `(∫|f|² dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// Rectangle-rule `∫f dx`; spectrally accurate for periodic fields.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.dx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_grid_requires_power_of_two() {
        assert!(Grid1D::periodic(100, 1.0).is_err());
        let g = Grid1D::periodic(8, 4.0).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.x(0), -2.0);
        let k = g.wavenumbers();
        let base = 2.0 * PI / 4.0;
        assert_eq!(k[3], 3.0 * base);
        assert_eq!(k[4], -4.0 * base);
        assert_eq!(k[7], -base);
    }

    #[test]
    fn field_rejects_wrong_length_and_nan() {
        let g = Grid1D::periodic(8, 1.0).unwrap();
        assert!(Field::new(g, vec![Complex64::new(0.0, 0.0); 7]).is_err());
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[2].re = f64::INFINITY;
        assert!(Field::new(g, v).is_err());
    }
}
