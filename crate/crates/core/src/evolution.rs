//! First-order autonomous evolution `u' = Au`.
//!
//! `U(t,s) = e^{(t−s)A}`, and for a shift κ keeping the spectrum of `U + κI`
//! off the cut, `α(t,s) = Log(U(t,s) + κI)` is a bounded alternative
//! generator. `A` is recovered as `(I − κe^{−α})⁻¹ ∂ₜα`.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matfun::solve::annotate;
use crate::matfun::spectrum::{distance_to_branch_cut, eigenvalues};
use crate::matfun::{expm, expm_scaled, logm_principal, solve};
use crate::matrix::{ComplexMatrix, MatrixJson};
use crate::report::Report;

/// Minimum distance of `spectrum(U + κI)` to the cut accepted by
/// [`log_representation`].
pub const LOG_GUARD: f64 = 1e-6;

/// Relative tolerance of the semigroup residual.
pub const SEMIGROUP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub generator: ComplexMatrix,
    pub label: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorJson {
    label: String,
    dim: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

impl GeneratorSpec {
    pub fn new(generator: ComplexMatrix, label: impl Into<String>) -> Self {
        Self {
            generator,
            label: label.into(),
        }
    }

    /// `{"label": .., "dim": n, "re": [[..]], "im": [[..]]}`
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GeneratorJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let generator = MatrixJson {
            dim: raw.dim,
            re: raw.re,
            im: raw.im,
        }
        .into_matrix()?;
        Ok(Self::new(generator, raw.label))
    }

    pub fn to_json(&self) -> String {
        let matrix = self.generator.to_json();
        let label = serde_json::to_string(&self.label).expect("string serializes");
        format!("{{\"label\": {label}, {}", &matrix[1..])
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSample {
    pub t: f64,
    pub s: f64,
    pub propagator: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRepresentation {
    pub kappa: Complex64,
    /// `Log(U(t,s) + κI)`
    pub alpha: ComplexMatrix,
    pub dalpha_dt: ComplexMatrix,
    pub t: f64,
    pub s: f64,
}

fn check_times(t: f64, s: f64) -> Result<()> {
    if t.is_finite() && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("non-finite time pair ({t}, {s})")))
    }
}

pub fn evolution_operator(g: &GeneratorSpec, t: f64, s: f64) -> Result<EvolutionSample> {
    check_times(t, s)?;
    Ok(EvolutionSample {
        t,
        s,
        propagator: expm_scaled(&g.generator, t - s)?,
    })
}

/// Scan order for κ: `i·2^k, −i·2^k, (1+i)·2^k` for `k = 0..=6`, each scaled
/// by `scale`.
pub fn kappa_candidates(scale: f64) -> impl Iterator<Item = Complex64> {
    (0..=6).flat_map(move |k| {
        let m = scale * f64::from(1u32 << k);
        [
            Complex64::new(0.0, m),
            Complex64::new(0.0, -m),
            Complex64::new(m, m),
        ]
    })
}

/// `max(1e-3, 1e-3·‖U‖_F)`
pub fn kappa_margin(u: &ComplexMatrix) -> f64 {
    1e-3 * u.frobenius_norm().max(1.0)
}

pub(crate) fn shifted_distance(spectrum: &[Complex64], kappa: Complex64) -> f64 {
    spectrum
        .iter()
        .map(|&z| distance_to_branch_cut(z + kappa))
        .fold(f64::INFINITY, f64::min)
}

/// Every admissible κ for `u`, in scan order.
pub fn admissible_kappas(u: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let spectrum = eigenvalues(u)?;
    let margin = kappa_margin(u);
    Ok(kappa_candidates(1.0 + u.frobenius_norm())
        .filter(|&k| shifted_distance(&spectrum, k) >= margin)
        .collect())
}

/// First κ in the scan set that keeps `spectrum(U + κI)` at least
/// [`kappa_margin`] away from the cut.
pub fn choose_kappa(u: &ComplexMatrix) -> Result<Complex64> {
    let spectrum = eigenvalues(u)?;
    let margin = kappa_margin(u);
    kappa_candidates(1.0 + u.frobenius_norm())
        .find(|&k| shifted_distance(&spectrum, k) >= margin)
        .ok_or(Error::SelectionFailed {
            eigenvalues: spectrum,
        })
}

/// `α = Log(U + κI)` from the propagator and its time derivative `∂ₜU`.
/// The derivative is `(U + κI)⁻¹ ∂ₜU`, valid because everything commutes.
pub(crate) fn shifted_log(
    propagator: &ComplexMatrix,
    derivative: &ComplexMatrix,
    kappa: Complex64,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let shifted = propagator.shifted(kappa);
    let spectrum = eigenvalues(&shifted)?;
    let distance = shifted_distance(&spectrum, Complex64::new(0.0, 0.0));
    if distance < LOG_GUARD {
        return Err(Error::BranchCutViolation {
            distance,
            eigenvalues: spectrum,
        });
    }
    let alpha = logm_principal(&shifted)?;
    let dalpha = solve(&shifted, derivative)?;
    Ok((alpha, dalpha))
}

pub fn log_representation(
    g: &GeneratorSpec,
    kappa: Complex64,
    t: f64,
    s: f64,
) -> Result<LogRepresentation> {
    if kappa == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("kappa must be nonzero".into()));
    }
    let u = evolution_operator(g, t, s)?.propagator;
    let du = &g.generator * &u;
    let (alpha, dalpha_dt) = shifted_log(&u, &du, kappa)?;
    Ok(LogRepresentation {
        kappa,
        alpha,
        dalpha_dt,
        t,
        s,
    })
}

/// `(I − κe^{−α})⁻¹ ∂ₜα` for an arbitrary shifted-log pair.
pub(crate) fn log_generator(
    kappa: Complex64,
    alpha: &ComplexMatrix,
    dalpha_dt: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let n = alpha.dim();
    let factor = &ComplexMatrix::identity(n) - &expm(&-alpha)?.scale(kappa);
    solve(&factor, dalpha_dt).map_err(|err| {
        let spectrum = eigenvalues(&factor).unwrap_or_default();
        annotate(
            err,
            format!("kappa = {kappa}, spectrum of I - kappa*exp(-alpha) = {spectrum:?}"),
        )
    })
}

pub fn reconstruct_generator(rep: &LogRepresentation) -> Result<ComplexMatrix> {
    log_generator(rep.kappa, &rep.alpha, &rep.dalpha_dt)
}

/// Residual `‖U(t,s) − U(t,r)U(r,s)‖_F / (1 + ‖U(t,s)‖_F)` per `(s, r, t)`.
pub fn verify_semigroup(g: &GeneratorSpec, times: &[(f64, f64, f64)]) -> Result<Report> {
    let mut report = Report::new("verify_semigroup");
    for (i, &(s, r, t)) in times.iter().enumerate() {
        if !(s <= r && r <= t) {
            return Err(Error::InvalidInput(format!(
                "triple {i} violates s <= r <= t: ({s}, {r}, {t})"
            )));
        }
        let direct = evolution_operator(g, t, s)?.propagator;
        let split = &evolution_operator(g, t, r)?.propagator * &evolution_operator(g, r, s)?.propagator;
        report.check(
            format!("{}/semigroup[{i:03}] s={s} r={r} t={t}", g.label),
            split.relative_distance(&direct),
            SEMIGROUP_TOLERANCE,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: f64) -> GeneratorSpec {
        GeneratorSpec::new(ComplexMatrix::from_real_diagonal(&[a]), "scalar")
    }

    #[test]
    fn zero_generator_gives_identity() {
        let g = GeneratorSpec::new(ComplexMatrix::zeros(3), "zero");
        assert_eq!(
            evolution_operator(&g, 2.0, -1.0).unwrap().propagator,
            ComplexMatrix::identity(3)
        );
    }

    #[test]
    fn decay_scalar() {
        let u = evolution_operator(&scalar(-1.0), 1.0, 0.0).unwrap().propagator;
        assert!((u.get(0, 0).re - (-1f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn kappa_for_identity_is_2i() {
        let k = choose_kappa(&ComplexMatrix::identity(1)).unwrap();
        assert_eq!(k, Complex64::new(0.0, 2.0));
        let shifted = ComplexMatrix::identity(1).shifted(k);
        assert!(distance_to_branch_cut(shifted.get(0, 0)) > 1e-3);
    }

    #[test]
    fn kappa_for_negative_spectrum_has_imaginary_part() {
        let u = ComplexMatrix::from_real_diagonal(&[-1.0, -3.0, 0.5]);
        let k = choose_kappa(&u).unwrap();
        assert!(k.im.abs() >= 1e-3);
        assert_eq!(k, kappa_candidates(1.0 + u.frobenius_norm()).next().unwrap());
    }

    #[test]
    fn kappa_scan_skips_inadmissible_candidates() {
        // i·(1+2000) shifts -2000i to i, closer than the margin 1e-3·2000.
        let u = ComplexMatrix::scalar(Complex64::new(0.0, -2000.0));
        assert_eq!(choose_kappa(&u).unwrap(), Complex64::new(0.0, -2001.0));
        let all = admissible_kappas(&u).unwrap();
        assert_eq!(all[0], Complex64::new(0.0, -2001.0));
        assert!(all.len() > 10);
    }

    #[test]
    fn zero_generator_log_representation() {
        let g = GeneratorSpec::new(ComplexMatrix::zeros(2), "zero");
        let k = Complex64::new(0.0, 2.0);
        let rep = log_representation(&g, k, 1.0, 0.0).unwrap();
        let expected = ComplexMatrix::identity(2).scale((Complex64::new(1.0, 0.0) + k).ln());
        assert!(rep.alpha.distance(&expected) < 1e-15);
        assert_eq!(rep.dalpha_dt, ComplexMatrix::zeros(2));
        assert_eq!(reconstruct_generator(&rep).unwrap(), ComplexMatrix::zeros(2));
    }

    #[test]
    fn scalar_calculus() {
        let (a, tau) = (0.7, 1.3);
        let k = Complex64::new(0.0, 2.0);
        let rep = log_representation(&scalar(a), k, tau, 0.0).unwrap();
        let e = Complex64::new((a * tau).exp(), 0.0);
        let alpha = (e + k).ln();
        let dalpha = a * e / (e + k);
        assert!((rep.alpha.get(0, 0) - alpha).norm() < 1e-15);
        assert!((rep.dalpha_dt.get(0, 0) - dalpha).norm() < 1e-15);
        let recon = reconstruct_generator(&rep).unwrap().get(0, 0);
        assert!((recon - Complex64::new(a, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_kappa_rejected() {
        assert!(log_representation(&scalar(1.0), Complex64::new(0.0, 0.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn kappa_on_cut_is_rejected() {
        // U = e, κ = -e - 1 puts U + κ at -1.
        let k = Complex64::new(-1.0f64.exp() - 1.0, 0.0);
        assert!(matches!(
            log_representation(&scalar(1.0), k, 1.0, 0.0),
            Err(Error::BranchCutViolation { .. })
        ));
    }

    #[test]
    fn nilpotent_semigroup() {
        let a = ComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0, 2.0],
            vec![0.0, 0.0, -1.5],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let g = GeneratorSpec::new(a, "nilpotent");
        let report = verify_semigroup(&g, &[(0.0, 0.5, 1.0), (-2.0, 0.0, 3.0), (1.0, 1.0, 1.0)])
            .unwrap();
        assert!(report.all_pass());
        assert!(report.max_residual() <= 1e-12);
        // closed form: I + tA + t²A²/2
        let t = 2.5;
        let a = &g.generator;
        let expected = &(&ComplexMatrix::identity(3) + &a.scale_real(t)) + &(a * a).scale_real(t * t / 2.0);
        let u = evolution_operator(&g, t, 0.0).unwrap().propagator;
        assert!(u.relative_distance(&expected) < 1e-14);
    }

    #[test]
    fn semigroup_rejects_unordered_triples() {
        let g = scalar(1.0);
        assert!(verify_semigroup(&g, &[(1.0, 0.0, 2.0)]).is_err());
    }

    #[test]
    fn generator_json_roundtrip() {
        let g = GeneratorSpec::new(
            ComplexMatrix::from_rows(&[vec![Complex64::new(0.25, -1.0)]]).unwrap(),
            "tiny \"quoted\"",
        );
        let back = GeneratorSpec::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(GeneratorSpec::from_json(r#"{"label": "x", "dim": 1, "re": [[0]], "bogus": 1}"#).is_err());
    }
}
