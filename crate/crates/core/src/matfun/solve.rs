use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Condition estimates above this are treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

fn check_dims(m: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if m.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Inverse together with the 1-norm condition estimate.
pub fn inverse_with_condition(m: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let singular = |condition| Error::SingularMatrix {
        condition,
        context: String::new(),
    };
    let inv = m
        .as_matrix()
        .clone()
        .lu()
        .try_inverse()
        .map(ComplexMatrix::from_raw)
        .ok_or_else(|| singular(f64::INFINITY))?;
    if !inv.is_finite() {
        return Err(singular(f64::INFINITY));
    }
    let condition = m.norm_one() * inv.norm_one();
    if !(condition <= SINGULAR_CONDITION) {
        return Err(singular(condition));
    }
    Ok((inv, condition))
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    inverse_with_condition(m).map(|(inv, _)| inv)
}

/// Solves `M X = B` by LU with partial pivoting.
pub fn solve(m: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(m, b)?;
    let (_, condition) = inverse_with_condition(m)?;
    let x = m
        .as_matrix()
        .clone()
        .lu()
        .solve(b.as_matrix())
        .ok_or(Error::SingularMatrix {
            condition,
            context: String::new(),
        })?;
    Ok(ComplexMatrix::from_raw(x))
}

pub fn solve_vec(
    m: &ComplexMatrix,
    b: &crate::matrix::ComplexVector,
) -> Result<crate::matrix::ComplexVector> {
    if b.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: b.len(),
        });
    }
    let (_, condition) = inverse_with_condition(m)?;
    m.as_matrix().clone().lu().solve(b).ok_or(Error::SingularMatrix {
        condition,
        context: String::new(),
    })
}

pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    m.as_matrix().clone().lu().determinant()
}

/// Attaches an annotation to a `SingularMatrix` error.
pub(crate) fn annotate(err: Error, note: impl Into<String>) -> Error {
    match err {
        Error::SingularMatrix { condition, .. } => Error::SingularMatrix {
            condition,
            context: note.into(),
        },
        other => other,
    }
}
