use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues plus the two scalars the principal-branch functions care about.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInfo {
    pub eigenvalues: Vec<Complex64>,
    /// Distance of the spectrum to the closed ray (−∞, 0].
    pub min_distance_to_branch_cut: f64,
    /// 1-norm condition number; infinite for exactly singular input.
    pub condition_estimate: f64,
}

impl SpectralInfo {
    pub fn touches_branch_cut(&self) -> bool {
        self.min_distance_to_branch_cut == 0.0
    }

    pub fn branch_cut_error(&self) -> Error {
        Error::BranchCutViolation {
            distance: self.min_distance_to_branch_cut,
            eigenvalues: self.eigenvalues.clone(),
        }
    }
}

/// Distance from `z` to the ray (−∞, 0].
pub fn distance_to_branch_cut(z: Complex64) -> f64 {
    if z.re > 0.0 {
        z.norm()
    } else {
        z.im.abs()
    }
}

pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if m.dim() == 1 {
        return Ok(vec![m.get(0, 0)]);
    }
    let schur = Schur::try_new(m.as_matrix().clone(), f64::EPSILON, SCHUR_MAX_ITER).ok_or(
        Error::NonConvergence {
            what: "Schur eigensolver",
            iterations: SCHUR_MAX_ITER,
        },
    )?;
    // Complex Schur form is upper triangular; its diagonal carries the spectrum.
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

pub fn condition_estimate(m: &ComplexMatrix) -> f64 {
    match m.as_matrix().clone().lu().try_inverse() {
        Some(inv) => {
            let inv = ComplexMatrix::from_raw(inv);
            if inv.is_finite() {
                m.norm_one() * inv.norm_one()
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

pub fn spectrum(m: &ComplexMatrix) -> Result<SpectralInfo> {
    let eigenvalues = eigenvalues(m)?;
    let min_distance_to_branch_cut = eigenvalues
        .iter()
        .map(|&z| distance_to_branch_cut(z))
        .fold(f64::INFINITY, f64::min);
    Ok(SpectralInfo {
        eigenvalues,
        min_distance_to_branch_cut,
        condition_estimate: condition_estimate(m),
    })
}
