use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the matrix-function, evolution and soliton layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("exponential overflow: 1-norm {norm:e} exceeds the scaling range")]
    Overflow { norm: f64 },

    #[error("spectrum touches the branch cut (-inf, 0]: distance {distance:e}")]
    BranchCutViolation {
        distance: f64,
        eigenvalues: Vec<Complex64>,
    },

    #[error("contour invalid: {reason}")]
    ContourViolation { reason: String },

    #[error("singular matrix{}: condition estimate {condition:e}", context_suffix(.context))]
    SingularMatrix { condition: f64, context: String },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("no admissible kappa in the scan set; spectrum {eigenvalues:?}")]
    SelectionFailed { eigenvalues: Vec<Complex64> },

    #[error("grid invalid: {0}")]
    InvalidGrid(String),

    #[error("profile tail {tail:e} exceeds 1e-12 at the domain edge")]
    DomainTooSmall { tail: f64 },

    #[error("solution blew up (max |u| = {max_abs:e}) at {location} = {at}")]
    BlowUp {
        max_abs: f64,
        location: &'static str,
        at: f64,
    },

    #[error("time step {dt:e} violates the nonlinear stability guard (limit {limit:e})")]
    StabilityGuard { dt: f64, limit: f64 },

    #[error("need at least {needed} snapshots, got {found}")]
    InsufficientSnapshots { needed: usize, found: usize },

    #[error("psi nearly vanishes at x = {x} (|psi| = {value:e})")]
    NearZeroPsi { x: f64, value: f64 },

    #[error("psi is not positive real at x = {x}")]
    NonPositivePsi { x: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

pub type Result<T> = std::result::Result<T, Error>;
