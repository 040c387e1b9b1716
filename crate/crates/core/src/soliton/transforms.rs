//! Miura, Cole-Hopf and the linear problem `ψ'' = uψ`, with residual reports.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::soliton::fd;
use crate::soliton::grid::{max_norm, Field};
use crate::soliton::pde::{kdv_rhs, Equation, PdeRun};
use crate::soliton::spectral::{dealiased_power, derivative};

/// `ψ` counts as vanishing below this fraction of `max|ψ|`.
pub const PSI_FLOOR: f64 = 1e-8;
/// Growth bound for `solve_linear_x`.
pub const LINEAR_BLOWUP: f64 = 1e100;

/// `u = ∂ₓv + v²`
pub fn miura(v: &Field) -> Field {
    derivative(v, 1).add(&dealiased_power(v, 2))
}

fn same_grid(a: &Field, b: &Field) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::InvalidGrid(format!(
            "fields live on different grids ({:?} vs {:?})",
            a.grid, b.grid
        )));
    }
    Ok(())
}

/// Maps every snapshot of an mKdV run through Miura and measures the KdV
/// residual `∂ₜu − 6u∂ₓu + ∂ₓ³u`, with `∂ₜ` from fourth-order central
/// differences over snapshots. Cases carry the worst snapshot.
pub fn miura_maps_solutions(run: &PdeRun, tolerance: f64) -> Result<Report> {
    if run.equation != Equation::MKdV {
        return Err(Error::InvalidInput(format!(
            "Miura maps mKdV runs, got a {} run",
            run.equation
        )));
    }
    let snaps = &run.snapshots;
    if snaps.len() < 5 {
        return Err(Error::InsufficientSnapshots {
            needed: 5,
            found: snaps.len(),
        });
    }
    let h = snaps[1].time - snaps[0].time;
    if snaps
        .windows(2)
        .any(|w| ((w[1].time - w[0].time) - h).abs() > 1e-9 * h.abs().max(1e-300))
    {
        return Err(Error::InvalidInput("snapshots are not evenly spaced".into()));
    }
    let u: Vec<Field> = snaps.iter().map(|s| miura(&s.field)).collect();
    let mut linf: f64 = 0.0;
    let mut l2: f64 = 0.0;
    for j in 2..u.len() - 2 {
        let dudt = u[j - 2]
            .sub(&u[j + 2])
            .add(&u[j + 1].sub(&u[j - 1]).scale(8.0))
            .scale(1.0 / (12.0 * h));
        let residual = dudt.sub(&kdv_rhs(&u[j]));
        linf = linf.max(residual.max_abs());
        l2 = l2.max(residual.l2_norm());
    }
    let mut report = Report::new("miura_maps_solutions");
    report.check("kdv_residual_linf", linf, tolerance);
    report.check("kdv_residual_l2", l2, tolerance);
    Ok(report)
}

/// `v = ψ⁻¹∂ₓψ`
pub fn cole_hopf(psi: &Field) -> Result<Field> {
    let scale = psi.max_abs();
    if let Some((j, z)) = psi
        .values
        .iter()
        .enumerate()
        .find(|(_, z)| !(z.norm() >= PSI_FLOOR * scale) || scale == 0.0)
    {
        return Err(Error::NearZeroPsi {
            x: psi.grid.x(j),
            value: z.norm(),
        });
    }
    let dpsi = derivative(psi, 1);
    Ok(dpsi.zip_with(psi, |d, p| d / p))
}

/// Solves `ψ'' = uψ` left to right by RK4 with step `dx`, starting from
/// `ψ(x_0) = psi0`, `ψ'(x_0) = dpsi0`. Midpoint values of `u` are interpolated.
pub fn solve_linear_x(u: &Field, psi0: Complex64, dpsi0: Complex64) -> Result<Field> {
    let n = u.grid.n_points;
    let h = u.grid.dx();
    let mid = fd::midpoints(&u.values);
    let mut psi = Vec::with_capacity(n);
    let (mut y, mut z) = (psi0, dpsi0);
    psi.push(y);
    for j in 0..n - 1 {
        let (u0, um, u1) = (u.values[j], mid[j], u.values[j + 1]);
        let (k1y, k1z) = (z, u0 * y);
        let (k2y, k2z) = (z + k1z * (h / 2.0), um * (y + k1y * (h / 2.0)));
        let (k3y, k3z) = (z + k2z * (h / 2.0), um * (y + k2y * (h / 2.0)));
        let (k4y, k4z) = (z + k3z * h, u1 * (y + k3y * h));
        y += (k1y + (k2y + k3y) * 2.0 + k4y) * (h / 6.0);
        z += (k1z + (k2z + k3z) * 2.0 + k4z) * (h / 6.0);
        let size = y.norm().max(z.norm());
        if !(size <= LINEAR_BLOWUP) {
            return Err(Error::BlowUp {
                max_abs: size,
                location: "x",
                at: u.grid.x(j + 1),
            });
        }
        psi.push(y);
    }
    Field::new(u.grid, psi)
}

/// `‖∂ₓv + v² − u‖` in L∞ and L².
pub fn riccati_residual(u: &Field, v: &Field, tolerance: f64) -> Result<Report> {
    same_grid(u, v)?;
    let r = miura(v).sub(u);
    let mut report = Report::new("riccati_residual");
    report.check("riccati_linf", r.max_abs(), tolerance);
    report.check("riccati_l2", r.l2_norm(), tolerance);
    Ok(report)
}

/// Compares `∂ₓ² log ψ` with `ψ''/ψ − (ψ'/ψ)²` for positive `ψ`.
pub fn hirota_identity_residual(psi: &Field, tolerance: f64) -> Result<Report> {
    if let Some(j) = psi.values.iter().position(|z| !(z.re > 0.0 && z.im == 0.0)) {
        return Err(Error::NonPositivePsi { x: psi.grid.x(j) });
    }
    let log_psi = psi.map(|z| Complex64::new(z.re.ln(), 0.0));
    let lhs = derivative(&log_psi, 2);
    let first = derivative(psi, 1).zip_with(psi, |d, p| d / p);
    let rhs = derivative(psi, 2)
        .zip_with(psi, |d, p| d / p)
        .sub(&first.mul(&first));
    let r = lhs.sub(&rhs);
    let mut report = Report::new("hirota_identity");
    report.check("hirota_linf", max_norm(&r.values), tolerance);
    report.check("hirota_l2", r.l2_norm(), tolerance);
    Ok(report)
}
