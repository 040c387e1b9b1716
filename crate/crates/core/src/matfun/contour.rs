//! Holomorphic functional calculus on a circle: trapezoidal quadrature of
//! `(1/2πi) ∮ f(z) (zI − M)⁻¹ dz`.
//!
//! Independent of the algebraic routes in `expm`/`logm`/`sqrtm`; used as their
//! oracle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matfun::solve::inverse;
use crate::matfun::spectrum::{distance_to_branch_cut, eigenvalues};
use crate::matrix::ComplexMatrix;

/// Eigenvalues closer than this fraction of the radius to the circle are
/// rejected.
const GUARD_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarFunction {
    Exp,
    /// Principal logarithm.
    Log,
    /// Principal square root.
    Sqrt,
}

impl ScalarFunction {
    pub fn eval(self, z: Complex64) -> Complex64 {
        match self {
            Self::Exp => z.exp(),
            Self::Log => z.ln(),
            Self::Sqrt => z.sqrt(),
        }
    }

    fn has_branch_cut(self) -> bool {
        !matches!(self, Self::Exp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    pub node_count: usize,
}

impl Contour {
    pub fn new(center: Complex64, radius: f64, node_count: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || node_count == 0 {
            return Err(Error::ContourViolation {
                reason: format!("radius {radius} / node_count {node_count} invalid"),
            });
        }
        Ok(Self {
            center,
            radius,
            node_count,
        })
    }

    /// Circle around `spectrum` that stays clear of the singularities of `f`.
    ///
    /// For the branch-cut functions the radius is the geometric mean of the
    /// spectral radius about the center and the center's distance to the cut,
    /// which balances the two geometric convergence factors.
    pub fn enclosing(spectrum: &[Complex64], f: ScalarFunction, node_count: usize) -> Result<Self> {
        let (mut re_lo, mut re_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut im_lo, mut im_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for z in spectrum {
            re_lo = re_lo.min(z.re);
            re_hi = re_hi.max(z.re);
            im_lo = im_lo.min(z.im);
            im_hi = im_hi.max(z.im);
        }
        let center = Complex64::new((re_lo + re_hi) / 2.0, (im_lo + im_hi) / 2.0);
        let inner = spectrum
            .iter()
            .map(|z| (z - center).norm())
            .fold(0.0, f64::max);
        let radius = if f.has_branch_cut() {
            let outer = distance_to_branch_cut(center);
            if inner >= outer {
                return Err(Error::ContourViolation {
                    reason: format!(
                        "no circle about {center} encloses the spectrum (radius {inner:e}) \
                         without meeting the branch cut (distance {outer:e})"
                    ),
                });
            }
            if inner == 0.0 {
                outer / 2.0
            } else {
                (inner * outer).sqrt()
            }
        } else {
            2.0 * inner + 1.0
        };
        Self::new(center, radius, node_count)
    }

    fn validate(&self, spectrum: &[Complex64], f: ScalarFunction) -> Result<()> {
        let guard = GUARD_FRACTION * self.radius;
        for &z in spectrum {
            let d = (z - self.center).norm();
            if d > self.radius - guard {
                return Err(Error::ContourViolation {
                    reason: format!("eigenvalue {z} not enclosed with guard {guard:e}"),
                });
            }
        }
        if f.has_branch_cut() && distance_to_branch_cut(self.center) <= self.radius + guard {
            return Err(Error::ContourViolation {
                reason: "contour meets the branch cut (-inf, 0]".into(),
            });
        }
        Ok(())
    }
}

pub fn riesz_dunford(f: ScalarFunction, m: &ComplexMatrix, contour: &Contour) -> Result<ComplexMatrix> {
    contour.validate(&eigenvalues(m)?, f)?;
    let n = m.dim();
    let nodes = contour.node_count;
    let mut acc = ComplexMatrix::zeros(n);
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let offset = Complex64::from_polar(contour.radius, theta);
        let z = contour.center + offset;
        let resolvent = inverse(&(-m).shifted(z))?;
        // dz = i·offset·dθ, so the 1/(2πi) prefactor leaves offset/N.
        acc = &acc + &resolvent.scale(f.eval(z) * offset);
    }
    Ok(acc.scale_real(1.0 / nodes as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        let c = Contour::new(Complex64::new(0.0, 0.0), 1.0, 32).unwrap();
        let r = riesz_dunford(ScalarFunction::Exp, &ComplexMatrix::zeros(3), &c).unwrap();
        assert!(r.distance(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn log_of_diagonal_matches_scalar_log() {
        let c = Contour::new(Complex64::new(2.5, 0.0), 1.0, 64).unwrap();
        let r = riesz_dunford(ScalarFunction::Log, &ComplexMatrix::from_real_diagonal(&[2.0, 3.0]), &c)
            .unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[2f64.ln(), 3f64.ln()]);
        assert!(r.distance(&expected) < 1e-10);
    }

    #[test]
    fn eigenvalue_on_contour_is_rejected() {
        let c = Contour::new(Complex64::new(2.5, 0.0), 0.5, 64).unwrap();
        let err = riesz_dunford(ScalarFunction::Log, &ComplexMatrix::from_real_diagonal(&[2.0, 2.5]), &c);
        assert!(matches!(err, Err(Error::ContourViolation { .. })));
    }

    #[test]
    fn contour_crossing_cut_is_rejected() {
        let c = Contour::new(Complex64::new(0.5, 0.0), 1.0, 64).unwrap();
        let err = riesz_dunford(ScalarFunction::Sqrt, &ComplexMatrix::identity(1), &c);
        assert!(matches!(err, Err(Error::ContourViolation { .. })));
        // exp has no cut: same circle is fine
        assert!(riesz_dunford(ScalarFunction::Exp, &ComplexMatrix::identity(1), &c).is_ok());
    }

    #[test]
    fn enclosing_circle_for_left_spectrum_fails_for_log() {
        let spec = [Complex64::new(-1.0, 1.0), Complex64::new(-1.0, -1.0)];
        assert!(Contour::enclosing(&spec, ScalarFunction::Log, 64).is_err());
        assert!(Contour::enclosing(&spec, ScalarFunction::Exp, 64).is_ok());
    }

    #[test]
    fn sqrt_of_diagonal() {
        let m = ComplexMatrix::from_real_diagonal(&[4.0, 9.0]);
        let c = Contour::enclosing(&[Complex64::new(4.0, 0.0), Complex64::new(9.0, 0.0)], ScalarFunction::Sqrt, 256)
            .unwrap();
        let r = riesz_dunford(ScalarFunction::Sqrt, &m, &c).unwrap();
        assert!(r.distance(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0])) < 1e-10);
    }
}
