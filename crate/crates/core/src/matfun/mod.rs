//! Dense complex matrix functions: exponential, principal logarithm, principal
//! square root, linear solves, spectra, and a contour-integral oracle.

pub mod contour;
pub mod expm;
pub mod logm;
pub mod solve;
pub mod spectrum;
pub mod sqrtm;

pub use contour::{riesz_dunford, Contour, ScalarFunction};
pub use expm::{expm, expm_scaled};
pub use logm::logm_principal;
pub use solve::{inverse, solve, solve_vec, SINGULAR_CONDITION};
pub use spectrum::{distance_to_branch_cut, spectrum, SpectralInfo};
pub use sqrtm::sqrtm_principal;
