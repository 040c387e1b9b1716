//! Second-order autonomous evolution `u'' = 𝒜u`.
//!
//! The evolution operator is realized on the forward branch,
//! `𝒰(t,s) = e^{(t−s)𝒜^{1/2}}`, with `𝒱 = ∂ₜ𝒰 = 𝒜^{1/2}𝒰`. Both carry a
//! κ-shifted logarithm; the product of the two logarithmic representations
//! rebuilds `𝒜` in either operator order, and its principal square root gives
//! the generators `±𝒜^{1/2}` of the two-mode solution
//! `u(t) = e^{+(t−s)𝒜^{1/2}}u₊ + e^{−(t−s)𝒜^{1/2}}u₋`.
//!
//! The full two-mode propagator is only exercised through the companion
//! system `[[0, I], [𝒜, 0]]`, which serves as the independent oracle.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::{kappa_candidates, kappa_margin, log_generator, shifted_distance, shifted_log};
use crate::matfun::solve::annotate;
use crate::matfun::spectrum::{eigenvalues, spectrum};
use crate::matfun::{expm_scaled, solve_vec, sqrtm_principal};
use crate::matrix::{ComplexMatrix, ComplexVector, ZERO};
use crate::report::Report;

/// Spectral distance to (−∞, 0], relative to `1 + ‖·‖_F`, required before a
/// principal square root is taken.
pub const SECTORIAL_GUARD: f64 = 1e-8;

/// Relative tolerance of the factorization residuals.
pub const FACTORIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderGenerator {
    acal: ComplexMatrix,
    sqrt_acal: Option<ComplexMatrix>,
}

fn sectorial_check(m: &ComplexMatrix) -> Result<()> {
    let info = spectrum(m)?;
    if info.min_distance_to_branch_cut <= SECTORIAL_GUARD * (1.0 + m.frobenius_norm()) {
        return Err(info.branch_cut_error());
    }
    Ok(())
}

impl SecondOrderGenerator {
    /// Caches the principal square root when the spectrum allows one.
    pub fn new(acal: ComplexMatrix) -> Self {
        let sqrt_acal = sectorial_check(&acal)
            .and_then(|_| sqrtm_principal(&acal))
            .ok();
        Self { acal, sqrt_acal }
    }

    pub fn acal(&self) -> &ComplexMatrix {
        &self.acal
    }

    pub fn dim(&self) -> usize {
        self.acal.dim()
    }

    pub fn sqrt_acal(&self) -> Result<&ComplexMatrix> {
        match &self.sqrt_acal {
            Some(s) => Ok(s),
            None => Err(match sectorial_check(&self.acal) {
                Err(e) => e,
                Ok(()) => Error::NonConvergence {
                    what: "Denman-Beavers square root",
                    iterations: crate::matfun::sqrtm::SQRT_MAX_ITER,
                },
            }),
        }
    }
}

/// Operator order in the product of the two logarithmic representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorOrder {
    /// `𝒰`-factor applied last: `L_𝒰 · L_𝒱`.
    UFirst,
    /// `𝒱`-factor applied last: `L_𝒱 · L_𝒰`.
    VFirst,
}

impl FactorOrder {
    pub const BOTH: [FactorOrder; 2] = [FactorOrder::VFirst, FactorOrder::UFirst];
}

impl fmt::Display for FactorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UFirst => "U_first",
            Self::VFirst => "V_first",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairLogRep {
    pub kappa: Complex64,
    /// `Log(𝒰 + κI)`
    pub alpha: ComplexMatrix,
    /// `Log(𝒱 + κI)`
    pub hat_alpha: ComplexMatrix,
    pub dalpha_dt: ComplexMatrix,
    pub dhat_alpha_dt: ComplexMatrix,
    pub t: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    pub u_plus: ComplexVector,
    pub u_minus: ComplexVector,
}

/// `[[0, I], [𝒜, 0]]`
pub fn companion_embed(g: &SecondOrderGenerator) -> ComplexMatrix {
    let n = g.dim();
    let a = g.acal.as_matrix();
    let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) if j - n == i => Complex64::new(1.0, 0.0),
        (false, true) => a[(i - n, j)],
        _ => ZERO,
    });
    ComplexMatrix::from_raw(m)
}

fn check_vec(n: usize, v: &ComplexVector) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        })
    }
}

/// `(u(t), u'(t))` from `(u(s), u'(s)) = (u0, v0)` via the companion system.
pub fn solve_companion(
    g: &SecondOrderGenerator,
    u0: &ComplexVector,
    v0: &ComplexVector,
    t: f64,
    s: f64,
) -> Result<(ComplexVector, ComplexVector)> {
    let n = g.dim();
    check_vec(n, u0)?;
    check_vec(n, v0)?;
    let propagator = expm_scaled(&companion_embed(g), t - s)?;
    let state = ComplexVector::from_iterator(2 * n, u0.iter().chain(v0.iter()).copied());
    let out = propagator.mul_vec(&state);
    Ok((out.rows(0, n).into_owned(), out.rows(n, n).into_owned()))
}

/// `𝒰(t,s) = e^{(t−s)𝒜^{1/2}}`
pub fn evolution_u(g: &SecondOrderGenerator, t: f64, s: f64) -> Result<ComplexMatrix> {
    expm_scaled(g.sqrt_acal()?, t - s)
}

/// `𝒱(t,s) = ∂ₜ𝒰(t,s) = 𝒜^{1/2}e^{(t−s)𝒜^{1/2}}`
pub fn evolution_v(g: &SecondOrderGenerator, t: f64, s: f64) -> Result<ComplexMatrix> {
    Ok(g.sqrt_acal()? * &evolution_u(g, t, s)?)
}

/// First κ of the scan set admissible for both `𝒰` and `𝒱`. The scan is scaled
/// by `1 + max(‖𝒰‖_F, ‖𝒱‖_F)` and each operator keeps its own margin.
pub fn choose_pair_kappa(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Complex64> {
    let (su, sv) = (eigenvalues(u)?, eigenvalues(v)?);
    let (mu, mv) = (kappa_margin(u), kappa_margin(v));
    let scale = 1.0 + u.frobenius_norm().max(v.frobenius_norm());
    kappa_candidates(scale)
        .find(|&k| shifted_distance(&su, k) >= mu && shifted_distance(&sv, k) >= mv)
        .ok_or_else(|| Error::SelectionFailed {
            eigenvalues: su.into_iter().chain(sv).collect(),
        })
}

/// κ chosen for the pair `(𝒰(t,s), 𝒱(t,s))`.
pub fn choose_kappa_at(g: &SecondOrderGenerator, t: f64, s: f64) -> Result<Complex64> {
    let u = evolution_u(g, t, s)?;
    let v = g.sqrt_acal()? * &u;
    choose_pair_kappa(&u, &v)
}

pub fn pair_log_representation(
    g: &SecondOrderGenerator,
    kappa: Complex64,
    t: f64,
    s: f64,
) -> Result<PairLogRep> {
    if kappa == ZERO {
        return Err(Error::InvalidInput("kappa must be nonzero".into()));
    }
    let root = g.sqrt_acal()?;
    let u = evolution_u(g, t, s)?;
    let v = root * &u;
    // ∂ₜ𝒰 = 𝒜^{1/2}𝒰 and ∂ₜ𝒱 = 𝒜^{1/2}𝒱
    let du = root * &u;
    let dv = root * &v;
    let (alpha, dalpha_dt) = shifted_log(&u, &du, kappa)?;
    let (hat_alpha, dhat_alpha_dt) = shifted_log(&v, &dv, kappa)?;
    Ok(PairLogRep {
        kappa,
        alpha,
        hat_alpha,
        dalpha_dt,
        dhat_alpha_dt,
        t,
        s,
    })
}

/// The two logarithmic representations `(L_𝒰, L_𝒱)`, each of the form
/// `(I − κe^{−α})⁻¹ ∂ₜα`.
pub fn log_factors(rep: &PairLogRep) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let lu = log_generator(rep.kappa, &rep.alpha, &rep.dalpha_dt)
        .map_err(|e| annotate(e, format!("U factor, kappa = {}", rep.kappa)))?;
    let lv = log_generator(rep.kappa, &rep.hat_alpha, &rep.dhat_alpha_dt)
        .map_err(|e| annotate(e, format!("V factor, kappa = {}", rep.kappa)))?;
    Ok((lu, lv))
}

/// Product of the two logarithmic representations in the given order.
pub fn abstract_miura(rep: &PairLogRep, order: FactorOrder) -> Result<ComplexMatrix> {
    let (lu, lv) = log_factors(rep).map_err(|e| match e {
        Error::SingularMatrix { condition, context } => Error::SingularMatrix {
            condition,
            context: format!("order {order}: {context}"),
        },
        other => other,
    })?;
    Ok(match order {
        FactorOrder::VFirst => &lv * &lu,
        FactorOrder::UFirst => &lu * &lv,
    })
}

/// `(+R, −R)` with `R` the principal square root of the abstract-Miura product.
pub fn sqrt_generators(rep: &PairLogRep, order: FactorOrder) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let product = abstract_miura(rep, order)?;
    sectorial_check(&product)?;
    let root = sqrtm_principal(&product)?;
    let neg = -&root;
    Ok((root, neg))
}

pub fn decompose_solution(
    g: &SecondOrderGenerator,
    u0: &ComplexVector,
    v0: &ComplexVector,
) -> Result<ModeDecomposition> {
    let n = g.dim();
    check_vec(n, u0)?;
    check_vec(n, v0)?;
    let smallest = eigenvalues(g.acal())?
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    if smallest <= f64::EPSILON * (1.0 + g.acal().frobenius_norm()) {
        return Err(Error::SingularMatrix {
            condition: f64::INFINITY,
            context: "square root of a generator with a zero eigenvalue".into(),
        });
    }
    let w = solve_vec(g.sqrt_acal()?, v0)?;
    Ok(ModeDecomposition {
        u_plus: (u0 + &w) * Complex64::new(0.5, 0.0),
        u_minus: (u0 - &w) * Complex64::new(0.5, 0.0),
    })
}

/// `e^{(t−s)𝒜^{1/2}}u₊ + e^{−(t−s)𝒜^{1/2}}u₋`
pub fn two_mode_solution(
    g: &SecondOrderGenerator,
    modes: &ModeDecomposition,
    t: f64,
    s: f64,
) -> Result<ComplexVector> {
    let root = g.sqrt_acal()?;
    let forward = expm_scaled(root, t - s)?;
    let backward = expm_scaled(root, s - t)?;
    Ok(forward.mul_vec(&modes.u_plus) + backward.mul_vec(&modes.u_minus))
}

/// `(‖[𝒰, 𝒱]‖_F, ‖[𝒰, ∂ₜ𝒱]‖_F)`, each relative to `1 + ‖𝒰‖_F‖·‖_F`.
pub fn commutation_witness(g: &SecondOrderGenerator, t: f64, s: f64) -> Result<(f64, f64)> {
    let u = evolution_u(g, t, s)?;
    let v = g.sqrt_acal()? * &u;
    let dv = g.acal() * &u;
    let scale = |m: &ComplexMatrix| 1.0 + u.frobenius_norm() * m.frobenius_norm();
    Ok((
        u.commutator(&v).frobenius_norm() / scale(&v),
        u.commutator(&dv).frobenius_norm() / scale(&dv),
    ))
}

/// Residuals of the factorized equation `(∂ₜ − R)(∂ₜ + R)u = 0` where `R` is
/// the square-root generator rebuilt from the logarithmic representations at
/// each sample time (with `s = 0`), and time derivatives of the pure modes
/// `e^{±t𝒜^{1/2}}` are taken analytically.
pub fn verify_factorization(g: &SecondOrderGenerator, t_samples: &[f64]) -> Result<Report> {
    let mut report = Report::new("verify_factorization");
    let root = g.sqrt_acal()?;
    let rel = |r: &ComplexMatrix, reference: &ComplexMatrix| {
        r.frobenius_norm() / (1.0 + reference.frobenius_norm())
    };
    for &t in t_samples {
        let kappa = choose_kappa_at(g, t, 0.0)?;
        let rep = pair_log_representation(g, kappa, t, 0.0)?;
        for order in FactorOrder::BOTH {
            let (r, _) = sqrt_generators(&rep, order)?;
            let forward = expm_scaled(root, t)?;
            let backward = expm_scaled(root, -t)?;
            let d_forward = root * &forward;
            let d_backward = -&(root * &backward);

            let fwd = &d_forward - &(&r * &forward);
            report.check(
                format!("t={t}/{order}/forward (d/dt - R)"),
                rel(&fwd, &d_forward),
                FACTORIZATION_TOLERANCE,
            );
            let bwd = &d_backward + &(&r * &backward);
            report.check(
                format!("t={t}/{order}/backward (d/dt + R)"),
                rel(&bwd, &d_backward),
                FACTORIZATION_TOLERANCE,
            );

            let rr = &r * &r;
            for (label, mode) in [("forward", &forward), ("backward", &backward)] {
                let dd = &(root * root) * mode;
                let resid = &dd - &(&rr * mode);
                report.check(
                    format!("t={t}/{order}/{label} factorized"),
                    rel(&resid, &dd),
                    FACTORIZATION_TOLERANCE,
                );
            }

            let mixed = &forward + &backward;
            let dd = &(root * root) * &mixed;
            let resid = &dd - &(g.acal() * &mixed);
            report.check(
                format!("t={t}/{order}/mixed second-order"),
                rel(&resid, &dd),
                FACTORIZATION_TOLERANCE,
            );
        }
    }
    Ok(report)
}
