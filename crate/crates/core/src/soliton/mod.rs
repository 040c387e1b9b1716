//! Periodic pseudo-spectral lab for KdV and mKdV and the transforms that
//! connect them.

pub mod csv;
pub mod fd;
pub mod grid;
pub mod pde;
pub mod spectral;
pub mod transforms;

pub use grid::{Boundary, Field, Grid1D};
pub use pde::{
    energy, integrate, kdv_rhs, kdv_soliton, kdv_soliton_at, mass, mkdv_kink, mkdv_kink_antikink,
    mkdv_rhs, Equation, PdeRun, Scheme, Snapshot,
};
pub use spectral::{dealias, dealiased_power, derivative, spectral_derivative};
pub use transforms::{
    cole_hopf, hirota_identity_residual, miura, miura_maps_solutions, riccati_residual,
    solve_linear_x,
};
