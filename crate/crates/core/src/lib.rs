//! Logarithmic representations of evolution generators in finite dimensions.
//!
//! * [`matfun`]: matrix exponential, principal logarithm and square root,
//!   contour-integral functional calculus.
//! * [`evolution`]: first-order evolution operators `U(t,s) = e^{(t−s)A}` and
//!   the κ-shifted logarithm `α = Log(U + κI)` from which `A` is recovered.
//! * [`second_order`]: `u'' = 𝒜u`, the product of two logarithmic
//!   representations that rebuilds `𝒜`, and its square-root generators.
//! * [`soliton`]: periodic pseudo-spectral KdV/mKdV laboratory with the
//!   Miura, Cole–Hopf and linearizing transforms.

pub mod error;
pub mod evolution;
pub mod fixtures;
pub mod matfun;
pub mod matrix;
pub mod report;
pub mod second_order;
pub mod soliton;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ComplexVector};
pub use report::{Case, Report};
