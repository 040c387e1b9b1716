//! Principal logarithm by inverse scaling and squaring.
//!
//! Square roots are taken until `‖X − I‖_F ≤ 0.25`; `log(I + E)` is then
//! evaluated with the diagonal Padé approximant written in partial fractions,
//! which coincides with Gauss–Legendre quadrature of
//! `∫₀¹ E (I + τE)⁻¹ dτ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matfun::expm::is_diagonal;
use crate::matfun::spectrum::{distance_to_branch_cut, eigenvalues};
use crate::matfun::solve::solve;
use crate::matfun::sqrtm::{check_principal, sqrtm_principal};
use crate::matrix::{ComplexMatrix, ZERO};

const NEAR_IDENTITY: f64 = 0.25;
const PADE_DEGREE: usize = 8;
const MAX_ROOTS: usize = 64;
/// Angular slack when checking that a scalar split keeps arguments unwrapped.
const WRAP_GUARD: f64 = 1e-6;

/// Gauss–Legendre nodes and weights on [0, 1].
pub(crate) fn gauss_legendre_unit(m: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(m);
    for i in 0..m {
        // Chebyshev-like initial guess for the i-th root of P_m on [-1, 1].
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push(((x + 1.0) / 2.0, w / 2.0));
    }
    rule
}

fn log_near_identity(e: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = e.dim();
    let id = ComplexMatrix::identity(n);
    let mut acc = ComplexMatrix::zeros(n);
    for (node, weight) in gauss_legendre_unit(PADE_DEGREE) {
        let denom = &id + &e.scale_real(node);
        acc = &acc + &solve(&denom, e)?.scale_real(weight);
    }
    Ok(acc)
}

pub fn logm_principal(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_principal(m)?;
    if is_diagonal(m) {
        let d: Vec<_> = m.diagonal().iter().map(|z| z.ln()).collect();
        return Ok(ComplexMatrix::from_diagonal(&d));
    }
    let n = m.dim();
    let id = ComplexMatrix::identity(n);
    if let Some(c) = scalar_factor(m)? {
        let rest = log_by_roots(&m.scale(c.inv()), &id)?;
        return Ok(rest.shifted(c.ln()));
    }
    log_by_roots(m, &id)
}

/// Scalar `c = tr(M)/n` with `Log M = ln(c)·I + Log(M/c)`, if that split is
/// valid (no eigenvalue argument wraps past ±π) and brings `M/c` closer to `I`.
fn scalar_factor(m: &ComplexMatrix) -> Result<Option<Complex64>> {
    let n = m.dim();
    let c = m.diagonal().iter().sum::<Complex64>() / n as f64;
    if c == ZERO {
        return Ok(None);
    }
    let id = ComplexMatrix::identity(n);
    let scaled = m.scale(c.inv());
    if scaled.distance(&id) >= m.distance(&id) {
        return Ok(None);
    }
    let arg_c = c.arg();
    let consistent = eigenvalues(m)?.iter().all(|&z| {
        let w = z / c;
        distance_to_branch_cut(w) > 0.0
            && (arg_c + w.arg()).abs() < PI - WRAP_GUARD
            && (arg_c + w.arg() - z.arg()).abs() < WRAP_GUARD
    });
    Ok(consistent.then_some(c))
}

fn log_by_roots(m: &ComplexMatrix, id: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut x = m.clone();
    let mut roots = 0;
    while x.distance(id) > NEAR_IDENTITY {
        if roots == MAX_ROOTS {
            return Err(Error::NonConvergence {
                what: "inverse scaling and squaring",
                iterations: MAX_ROOTS,
            });
        }
        x = sqrtm_principal(&x)?;
        roots += 1;
    }
    let log = log_near_identity(&(&x - id))?;
    Ok(log.scale_real(2f64.powi(roots as i32)))
}
