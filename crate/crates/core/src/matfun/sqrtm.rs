//! Principal square root by the Denman–Beavers coupled iteration with
//! determinant scaling during the early steps.

use crate::error::{Error, Result};
use crate::matfun::expm::is_diagonal;
use crate::matfun::solve::{determinant, inverse};
use crate::matfun::spectrum::spectrum;
use crate::matrix::ComplexMatrix;

pub const SQRT_TOLERANCE: f64 = 1e-13;
pub const SQRT_MAX_ITER: usize = 60;

/// Relative step below which determinant scaling is switched off.
const SCALING_CUTOFF: f64 = 1e-2;

/// Rejects spectra that touch (−∞, 0].
pub(crate) fn check_principal(m: &ComplexMatrix) -> Result<()> {
    let info = spectrum(m)?;
    let scale = f64::EPSILON * (1.0 + m.frobenius_norm());
    if info.min_distance_to_branch_cut <= scale {
        return Err(info.branch_cut_error());
    }
    Ok(())
}

pub fn sqrtm_principal(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_principal(m)?;
    if is_diagonal(m) {
        let d: Vec<_> = m.diagonal().iter().map(|z| z.sqrt()).collect();
        return Ok(ComplexMatrix::from_diagonal(&d));
    }
    denman_beavers(m)
}

fn denman_beavers(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim() as f64;
    let mut y = m.clone();
    let mut z = ComplexMatrix::identity(m.dim());
    let mut scaling = true;
    let mut previous_step = f64::INFINITY;
    for _ in 0..SQRT_MAX_ITER {
        let mu = if scaling {
            let det = (determinant(&y) * determinant(&z)).norm();
            if det.is_finite() && det > 0.0 {
                det.powf(-1.0 / (2.0 * n))
            } else {
                1.0
            }
        } else {
            1.0
        };
        let y_inv = inverse(&y)?;
        let z_inv = inverse(&z)?;
        let y_next = (&y.scale_real(mu) + &z_inv.scale_real(1.0 / mu)).scale_real(0.5);
        let z_next = (&z.scale_real(mu) + &y_inv.scale_real(1.0 / mu)).scale_real(0.5);
        let step = y_next.distance(&y) / y_next.frobenius_norm();
        y = y_next;
        z = z_next;
        if step <= SQRT_TOLERANCE {
            return Ok(y);
        }
        // Roundoff floor: the step has stopped shrinking at a tiny level.
        if step < 1e3 * SQRT_TOLERANCE && step >= previous_step {
            return Ok(y);
        }
        if step < SCALING_CUTOFF {
            scaling = false;
        }
        previous_step = step;
    }
    Err(Error::NonConvergence {
        what: "Denman-Beavers square root",
        iterations: SQRT_MAX_ITER,
    })
}
