//! Matrix exponential by scaling and squaring around a diagonal Padé core.
//!
//! The Padé degree is the smallest of {3, 5, 7, 9, 13} whose backward-error
//! threshold covers the 1-norm of the input; above the degree-13 threshold the
//! input is scaled by `2^-s` and the result squared `s` times.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matfun::solve::solve;
use crate::matrix::ComplexMatrix;

/// (degree, 1-norm threshold) pairs for double precision.
const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

/// Squarings beyond this would need an input norm far past `f64` range.
const MAX_SQUARINGS: u32 = 1100;

/// Coefficients of the numerator of the `[m/m]` Padé approximant to `e^x`.
fn pade_coefficients(m: usize) -> Vec<f64> {
    let mut c = vec![1.0; m + 1];
    for j in 1..=m {
        c[j] = c[j - 1] * (m - j + 1) as f64 / (j * (2 * m - j + 1)) as f64;
    }
    c
}

fn pade(a: &ComplexMatrix, m: usize) -> Result<ComplexMatrix> {
    let n = a.dim();
    let c = pade_coefficients(m);
    let mut even = ComplexMatrix::identity(n).scale_real(c[0]);
    let mut odd = ComplexMatrix::zeros(n);
    let mut power = ComplexMatrix::identity(n);
    for (j, &cj) in c.iter().enumerate().skip(1) {
        power = &power * a;
        if j % 2 == 0 {
            even = &even + &power.scale_real(cj);
        } else {
            odd = &odd + &power.scale_real(cj);
        }
    }
    let numerator = &even + &odd;
    let denominator = &even - &odd;
    solve(&denominator, &numerator)
}

pub(crate) fn is_diagonal(a: &ComplexMatrix) -> bool {
    let n = a.dim();
    (0..n).all(|j| (0..n).all(|i| i == j || a.get(i, j) == crate::matrix::ZERO))
}

fn trace_mean(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().sum::<Complex64>() / a.dim() as f64
}

/// `e^A`. The mean eigenvalue `μ = tr(A)/n` is split off as the scalar
/// factor `e^μ` whenever that lowers the norm seen by the Padé core.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = a.norm_one();
    if !norm.is_finite() {
        return Err(Error::Overflow { norm });
    }
    if is_diagonal(a) {
        let d: Vec<_> = a.diagonal().iter().map(|z| z.exp()).collect();
        return Ok(ComplexMatrix::from_diagonal(&d));
    }
    let mu = trace_mean(a);
    let centered = a.shifted(-mu);
    let result = if centered.norm_one() < norm {
        expm_core(&centered)?.scale(mu.exp())
    } else {
        expm_core(a)?
    };
    if !result.is_finite() {
        return Err(Error::Overflow { norm });
    }
    Ok(result)
}

fn expm_core(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = a.norm_one();
    let result = if let Some(&(m, _)) = THETA.iter().find(|(_, theta)| norm <= *theta) {
        pade(a, m)?
    } else {
        let theta13 = THETA[4].1;
        let s = (norm / theta13).log2().ceil().max(0.0) as u32;
        if s > MAX_SQUARINGS {
            return Err(Error::Overflow { norm });
        }
        let scaled = a.scale_real(0.5f64.powi(s as i32));
        let mut r = pade(&scaled, 13)?;
        for _ in 0..s {
            r = &r * &r;
            if !r.is_finite() {
                return Err(Error::Overflow { norm });
            }
        }
        r
    };
    Ok(result)
}

/// `e^{tA}` for a real time factor.
pub fn expm_scaled(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(a.dim()));
    }
    expm(&a.scale_real(t))
}
