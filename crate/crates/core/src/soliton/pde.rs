//! KdV and defocusing mKdV on periodic grids, integrated with an
//! integrating-factor RK4 scheme.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::soliton::grid::{max_norm, Boundary, Field, Grid1D};
use crate::soliton::spectral::{dealiased_power, derivative, Spectral};

/// Largest `|u|` tolerated before a run is declared blown up.
pub const BLOWUP_THRESHOLD: f64 = 1e6;
/// RK4 reaches this far along the imaginary axis.
pub const RK4_STABILITY_LIMIT: f64 = 2.8;
/// Largest profile value allowed at the domain edge.
pub const TAIL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    /// `∂ₜu − 6u∂ₓu + ∂ₓ³u = 0`
    #[serde(rename = "KdV")]
    KdV,
    /// `∂ₜv − 6v²∂ₓv + ∂ₓ³v = 0`
    #[serde(rename = "mKdV")]
    MKdV,
}

impl Equation {
    /// Power `p` of the flux `u^p`: 2 for KdV, 3 for mKdV.
    fn flux_power(self) -> u32 {
        match self {
            Equation::KdV => 2,
            Equation::MKdV => 3,
        }
    }

    /// Coefficient `c` with `6u^{p−2}u∂ₓu = c·∂ₓ(u^p)`.
    fn flux_coefficient(self) -> f64 {
        match self {
            Equation::KdV => 3.0,
            Equation::MKdV => 2.0,
        }
    }

    pub fn rhs(self, u: &Field) -> Field {
        match self {
            Equation::KdV => kdv_rhs(u),
            Equation::MKdV => mkdv_rhs(u),
        }
    }
}

impl std::fmt::Display for Equation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Equation::KdV => "KdV",
            Equation::MKdV => "mKdV",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "IFRK4")]
    Ifrk4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub field: Field,
}

/// A run description and, once integrated, its snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeRun {
    pub equation: Equation,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Steps between stored snapshots; must divide the step count.
    pub snapshot_every: usize,
    pub snapshots: Vec<Snapshot>,
}

impl PdeRun {
    pub fn new(equation: Equation, dt: f64, t_end: f64, snapshot_every: usize) -> Result<Self> {
        let run = Self {
            equation,
            dt,
            t_end,
            scheme: Scheme::Ifrk4,
            snapshot_every,
            snapshots: Vec::new(),
        };
        run.step_count()?;
        Ok(run)
    }

    /// Number of steps, rejecting `t_end` that is not a multiple of `dt`.
    pub fn step_count(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite() && self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "dt = {} and t_end = {} must be positive",
                self.dt, self.t_end
            )));
        }
        let steps = (self.t_end / self.dt).round();
        if (steps * self.dt - self.t_end).abs() > 1e-9 * self.t_end {
            return Err(Error::InvalidInput(format!(
                "t_end = {} is not a multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        let steps = steps as usize;
        if self.snapshot_every == 0 || steps % self.snapshot_every != 0 {
            return Err(Error::InvalidInput(format!(
                "snapshot_every = {} must divide the {steps} steps",
                self.snapshot_every
            )));
        }
        Ok(steps)
    }

    pub fn final_field(&self) -> Option<&Field> {
        self.snapshots.last().map(|s| &s.field)
    }
}

/// `∂ₜu = 6u∂ₓu − ∂ₓ³u`, the product dealiased.
pub fn kdv_rhs(u: &Field) -> Field {
    flux_rhs(u, Equation::KdV)
}

/// `∂ₜv = 6v²∂ₓv − ∂ₓ³v`, the cube dealiased.
pub fn mkdv_rhs(v: &Field) -> Field {
    flux_rhs(v, Equation::MKdV)
}

fn flux_rhs(u: &Field, eq: Equation) -> Field {
    let flux = dealiased_power(u, eq.flux_power());
    derivative(&flux, 1)
        .scale(eq.flux_coefficient())
        .sub(&derivative(u, 3))
}

/// Largest `dt` the nonlinear stability guard allows for `u0`.
pub fn stability_limit(equation: Equation, u0: &Field) -> f64 {
    let amplitude = u0.max_abs().powi(equation.flux_power() as i32 - 1);
    let rate = 6.0 * amplitude * u0.grid.dealiased_kmax();
    if rate == 0.0 {
        f64::INFINITY
    } else {
        RK4_STABILITY_LIMIT / rate
    }
}

/// Integrates `u0` to `run.t_end`, storing the initial field and every
/// `snapshot_every`-th step. Real data stays real.
pub fn integrate(mut run: PdeRun, u0: &Field) -> Result<PdeRun> {
    let grid = u0.grid;
    if grid.boundary != Boundary::Periodic {
        return Err(Error::InvalidGrid("time integration needs a periodic grid".into()));
    }
    let steps = run.step_count()?;
    let limit = stability_limit(run.equation, u0);
    if run.dt > limit {
        return Err(Error::StabilityGuard { dt: run.dt, limit });
    }
    let stepper = Stepper::new(grid, run.equation, run.dt, u0.is_real());

    let mut spec = stepper.ops.forward(&u0.values);
    stepper.ops.truncate(&mut spec);
    stepper.symmetrize(&mut spec);

    run.snapshots.clear();
    run.snapshots.push(Snapshot {
        time: 0.0,
        field: stepper.field(&spec),
    });
    for step in 1..=steps {
        let t_prev = (step - 1) as f64 * run.dt;
        spec = stepper.step(&spec, t_prev)?;
        if step % run.snapshot_every == 0 {
            let field = stepper.field(&spec);
            let max_abs = field.max_abs();
            let time = step as f64 * run.dt;
            if !(max_abs <= BLOWUP_THRESHOLD) {
                return Err(Error::BlowUp {
                    max_abs,
                    location: "t",
                    at: time,
                });
            }
            run.snapshots.push(Snapshot { time, field });
        }
    }
    Ok(run)
}

struct Stepper {
    grid: Grid1D,
    ops: Spectral,
    real: bool,
    dt: f64,
    power: u32,
    /// `c·ik` per mode: the nonlinear term is `c·ik·P(u^p)^`.
    flux_multiplier: Vec<Complex64>,
    /// `exp(ik³·dt/2)`
    half: Vec<Complex64>,
}

impl Stepper {
    fn new(grid: Grid1D, equation: Equation, dt: f64, real: bool) -> Self {
        let ops = Spectral::new(&grid);
        let k = ops.wavenumbers().to_vec();
        let n = grid.n_points;
        let flux_multiplier = k
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if j == n / 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, equation.flux_coefficient() * k)
                }
            })
            .collect();
        let half = k
            .iter()
            .map(|&k| Complex64::from_polar(1.0, k * k * k * dt / 2.0))
            .collect();
        Self {
            grid,
            ops,
            real,
            dt,
            power: equation.flux_power(),
            flux_multiplier,
            half,
        }
    }

    fn physical(&self, spec: &[Complex64]) -> Vec<Complex64> {
        let mut u = self.ops.inverse(spec);
        if self.real {
            u.iter_mut().for_each(|z| z.im = 0.0);
        }
        u
    }

    fn field(&self, spec: &[Complex64]) -> Field {
        // non-finite values are caught by the blow-up check, not here
        Field {
            grid: self.grid,
            values: self.physical(spec),
        }
    }

    /// Nonlinear term and `max|u|` of the state it was evaluated at.
    fn nonlinear_with_max(&self, spec: &[Complex64]) -> (Vec<Complex64>, f64) {
        let u = self.physical(spec);
        let max_abs = max_norm(&u);
        let p: Vec<Complex64> = u.iter().map(|z| z.powu(self.power)).collect();
        let mut out = self.ops.forward(&p);
        self.ops.truncate(&mut out);
        for (z, m) in out.iter_mut().zip(&self.flux_multiplier) {
            *z *= m;
        }
        (out, max_abs)
    }

    fn nonlinear(&self, spec: &[Complex64]) -> Vec<Complex64> {
        self.nonlinear_with_max(spec).0
    }

    /// Hermitian projection so real runs cannot drift into complex values.
    fn symmetrize(&self, spec: &mut [Complex64]) {
        if !self.real {
            return;
        }
        let n = spec.len();
        spec[0].im = 0.0;
        for j in 1..n / 2 {
            let avg = (spec[j] + spec[n - j].conj()) * 0.5;
            spec[j] = avg;
            spec[n - j] = avg.conj();
        }
        spec[n / 2] = Complex64::new(0.0, 0.0);
    }

    fn step(&self, u: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let dt = self.dt;
        let e = &self.half;
        let (a, max_abs) = self.nonlinear_with_max(u);
        if !(max_abs <= BLOWUP_THRESHOLD) {
            return Err(Error::BlowUp {
                max_abs,
                location: "t",
                at: t,
            });
        }
        let n = u.len();
        let mut stage = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            stage[j] = e[j] * (u[j] + a[j] * (dt / 2.0));
        }
        let b = self.nonlinear(&stage);
        for j in 0..n {
            stage[j] = e[j] * u[j] + b[j] * (dt / 2.0);
        }
        let c = self.nonlinear(&stage);
        for j in 0..n {
            stage[j] = e[j] * e[j] * u[j] + e[j] * c[j] * dt;
        }
        let d = self.nonlinear(&stage);
        let mut next: Vec<Complex64> = (0..n)
            .map(|j| {
                let e2 = e[j] * e[j];
                e2 * u[j] + (e2 * a[j] + e[j] * (b[j] + c[j]) * 2.0 + d[j]) * (dt / 6.0)
            })
            .collect();
        self.symmetrize(&mut next);
        Ok(next)
    }
}

/// Distance from `center` to `x`, wrapped into `[−L/2, L/2)` on periodic grids.
fn offset(grid: &Grid1D, x: f64, center: f64) -> f64 {
    let d = x - center;
    match grid.boundary {
        Boundary::Periodic => d - grid.length * (d / grid.length).round(),
        Boundary::Window => d,
    }
}

fn kdv_profile(c: f64, d: f64) -> f64 {
    let s = 1.0 / (c.sqrt() * d / 2.0).cosh();
    -(c / 2.0) * s * s
}

/// `u = −(c/2)·sech²(√c(x−x0)/2)`, a KdV wave moving right with speed `c`.
/// On periodic grids the profile is centered on the nearest image of `x0`.
pub fn kdv_soliton(grid: Grid1D, c: f64, x0: f64) -> Result<Field> {
    if !(c > 0.0 && c.is_finite() && x0.is_finite()) {
        return Err(Error::InvalidInput(format!("soliton speed c = {c} must be positive")));
    }
    let tail = match grid.boundary {
        Boundary::Periodic => kdv_profile(c, grid.length / 2.0).abs(),
        Boundary::Window => {
            let last = grid.x_min + grid.length;
            kdv_profile(c, grid.x_min - x0)
                .abs()
                .max(kdv_profile(c, last - x0).abs())
        }
    };
    if tail > TAIL_TOLERANCE {
        return Err(Error::DomainTooSmall { tail });
    }
    Ok(Field::from_fn(grid, |x| kdv_profile(c, offset(&grid, x, x0))))
}

/// Exact KdV soliton at time `t`, wrapped onto the grid.
pub fn kdv_soliton_at(grid: Grid1D, c: f64, x0: f64, t: f64) -> Result<Field> {
    kdv_soliton(grid, c, x0 + c * t)
}

/// `v = b·tanh(b(x−x0))` on a non-periodic window; speed `−2b²`.
pub fn mkdv_kink(grid: Grid1D, b: f64, x0: f64) -> Result<Field> {
    if grid.boundary != Boundary::Window {
        return Err(Error::InvalidGrid(
            "a single kink is not periodic; use a window or a kink-antikink pair".into(),
        ));
    }
    if !(b > 0.0 && b.is_finite() && x0.is_finite()) {
        return Err(Error::InvalidInput(format!("kink amplitude b = {b} must be positive")));
    }
    Ok(Field::from_fn(grid, |x| b * (b * (x - x0)).tanh()))
}

/// `v = b(tanh(b(x−x1)) − tanh(b(x−x2)) − 1)`, equal to `−b` outside
/// `[x1, x2]` and `b` inside, so it fits a periodic box.
pub fn mkdv_kink_antikink(grid: Grid1D, b: f64, x1: f64, x2: f64) -> Result<Field> {
    if !(b > 0.0 && b.is_finite() && x1 < x2) {
        return Err(Error::InvalidInput(format!(
            "kink-antikink needs b > 0 and x1 < x2 (b = {b}, x1 = {x1}, x2 = {x2})"
        )));
    }
    let profile = |x: f64| b * ((b * (x - x1)).tanh() - (b * (x - x2)).tanh() - 1.0);
    let last = grid.x_min + grid.length;
    let tail = (profile(grid.x_min) + b).abs().max((profile(last) + b).abs());
    if tail > TAIL_TOLERANCE {
        return Err(Error::DomainTooSmall { tail });
    }
    Ok(Field::from_fn(grid, profile))
}

/// `∫u dx`
pub fn mass(u: &Field) -> f64 {
    u.integral().re
}

/// `∫|u|² dx`
pub fn energy(u: &Field) -> f64 {
    u.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * u.grid.dx()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::periodic(256, 40.0).unwrap()
    }

    #[test]
    fn zero_and_constant_have_zero_rhs() {
        let g = grid();
        assert_eq!(kdv_rhs(&Field::zeros(g)).max_abs(), 0.0);
        assert!(kdv_rhs(&Field::constant(g, 1.7)).max_abs() < 1e-12);
        assert!(mkdv_rhs(&Field::constant(g, -0.4)).max_abs() < 1e-12);
    }

    #[test]
    fn soliton_shape() {
        let u = kdv_soliton(Grid1D::periodic(512, 40.0).unwrap(), 4.0, 0.0).unwrap();
        assert_eq!(u.values[256].re, -2.0);
        assert!(matches!(
            kdv_soliton(Grid1D::periodic(64, 10.0).unwrap(), 1.0, 0.0),
            Err(Error::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn kink_requires_window() {
        assert!(mkdv_kink(grid(), 1.0, 0.0).is_err());
        let w = Grid1D::window(64, -5.0, 10.0).unwrap();
        let v = mkdv_kink(w, 1.0, 0.0).unwrap();
        assert!(v.values[32].re.abs() < 1e-15);
    }

    #[test]
    fn bad_step_configuration_is_rejected() {
        assert!(PdeRun::new(Equation::KdV, 0.3, 1.0, 1).is_err());
        assert!(PdeRun::new(Equation::KdV, 0.25, 1.0, 3).is_err());
        assert!(PdeRun::new(Equation::KdV, 0.25, 1.0, 2).is_ok());
    }

    #[test]
    fn stability_guard_trips() {
        let g = grid();
        let u0 = Field::constant(g, 100.0);
        let run = PdeRun::new(Equation::KdV, 0.01, 0.1, 1).unwrap();
        assert!(matches!(integrate(run, &u0), Err(Error::StabilityGuard { .. })));
    }

    #[test]
    fn constant_stays_constant() {
        let g = grid();
        let u0 = Field::constant(g, 0.3);
        let run = integrate(PdeRun::new(Equation::MKdV, 1e-3, 0.05, 10).unwrap(), &u0).unwrap();
        assert_eq!(run.snapshots.len(), 6);
        for s in &run.snapshots {
            assert!(s.field.linf_distance(&u0) < 1e-14);
        }
    }
}
