use num_complex::Complex64;
use proptest::prelude::*;

use miura_core::evolution::{
    admissible_kappas, choose_kappa, evolution_operator, log_representation, reconstruct_generator,
    verify_semigroup, GeneratorSpec,
};
use miura_core::fixtures::Fixtures;
use miura_core::matfun::{expm, spectrum};
use miura_core::{ComplexMatrix, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    a.distance(reference) / (1.0 + reference.frobenius_norm())
}

fn spec(a: ComplexMatrix) -> GeneratorSpec {
    GeneratorSpec::new(a, "test")
}

#[test]
fn zero_generator_gives_identity_and_constant_log() {
    let g = spec(ComplexMatrix::zeros(3));
    let u = evolution_operator(&g, 1.3, -0.4).unwrap().propagator;
    assert_eq!(u, ComplexMatrix::identity(3));
    let kappa = c(0.0, 2.0);
    let rep = log_representation(&g, kappa, 1.0, 0.0).unwrap();
    let expected = ComplexMatrix::identity(3).scale((c(1.0, 0.0) + kappa).ln());
    assert!(rep.alpha.distance(&expected) <= 1e-14);
    assert!(rep.dalpha_dt.frobenius_norm() == 0.0);
    assert!(reconstruct_generator(&rep).unwrap().frobenius_norm() == 0.0);
}

#[test]
fn scalar_log_representation_matches_calculus() {
    let a = c(-0.7, 0.4);
    let tau = 1.6;
    let g = spec(ComplexMatrix::scalar(a));
    let kappa = c(0.0, 3.0);
    let rep = log_representation(&g, kappa, tau, 0.0).unwrap();
    let e = (a * tau).exp();
    assert!((rep.alpha.get(0, 0) - (e + kappa).ln()).norm() <= 1e-14);
    assert!((rep.dalpha_dt.get(0, 0) - a * e / (e + kappa)).norm() <= 1e-14);
    assert!((reconstruct_generator(&rep).unwrap().get(0, 0) - a).norm() <= 1e-14);
}

#[test]
fn kappa_for_identity_and_negative_spectrum() {
    assert_eq!(choose_kappa(&ComplexMatrix::identity(1)).unwrap(), c(0.0, 2.0));
    let u = ComplexMatrix::from_real_diagonal(&[-1.0, -0.5]);
    let kappa = choose_kappa(&u).unwrap();
    assert!(kappa.im.abs() >= 1e-3);
}

#[test]
fn zero_kappa_is_rejected() {
    let g = spec(ComplexMatrix::identity(2));
    assert!(matches!(
        log_representation(&g, c(0.0, 0.0), 1.0, 0.0),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn nilpotent_semigroup_is_exact() {
    let a = ComplexMatrix::from_real_rows(&[
        vec![0.0, 1.0, 2.0],
        vec![0.0, 0.0, -3.0],
        vec![0.0, 0.0, 0.0],
    ])
    .unwrap();
    let report = verify_semigroup(&spec(a), &[(0.0, 0.5, 1.0), (-1.0, 0.0, 2.0)]).unwrap();
    assert!(report.all_pass());
    assert!(report.max_residual() <= 1e-12);
}

#[test]
fn unordered_triple_is_rejected() {
    let g = spec(ComplexMatrix::identity(2));
    assert!(verify_semigroup(&g, &[(1.0, 0.0, 2.0)]).is_err());
}

#[test]
fn generator_json_roundtrip() {
    let mut fx = Fixtures::new(3);
    let g = GeneratorSpec::new(fx.generator(3), "roundtrip");
    let back = GeneratorSpec::from_json(&g.to_json()).unwrap();
    assert_eq!(back, g);
    assert!(GeneratorSpec::from_json(r#"{"label":"x","dim":1,"re":[[1]],"extra":0}"#).is_err());
}

/// Central differences in `t` at steps `h` and `h/2`, Richardson-combined.
fn richardson_dalpha(g: &GeneratorSpec, kappa: Complex64, t: f64, h: f64) -> ComplexMatrix {
    let central = |h: f64| {
        let plus = log_representation(g, kappa, t + h, 0.0).unwrap().alpha;
        let minus = log_representation(g, kappa, t - h, 0.0).unwrap().alpha;
        (&plus - &minus).scale_real(1.0 / (2.0 * h))
    };
    let coarse = central(h);
    let fine = central(h / 2.0);
    (&fine.scale_real(4.0) - &coarse).scale_real(1.0 / 3.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup_holds(seed in any::<u64>(), n in 1usize..=6) {
        let mut fx = Fixtures::new(seed);
        let g = spec(fx.generator(n));
        let report = verify_semigroup(&g, &[(0.0, 1.0, 2.0), (0.2, 0.3, 0.9)]).unwrap();
        prop_assert!(report.all_pass(), "{:?}", report.cases);
        let u = evolution_operator(&g, 0.7, 0.7).unwrap().propagator;
        prop_assert!(u.distance(&ComplexMatrix::identity(n)) == 0.0);
    }

    #[test]
    fn generator_is_reconstructed(seed in any::<u64>(), n in 1usize..=8, tau in 0.1f64..=1.5) {
        let mut fx = Fixtures::new(seed);
        let a = fx.generator(n);
        let g = spec(a.clone());
        let u = evolution_operator(&g, tau, 0.0).unwrap().propagator;
        let kappa = choose_kappa(&u).unwrap();
        let rep = log_representation(&g, kappa, tau, 0.0).unwrap();
        let r = rel(&reconstruct_generator(&rep).unwrap(), &a);
        prop_assert!(r <= 1e-8, "{:e}", r);
        prop_assert!(rel(&expm(&rep.alpha).unwrap().shifted(-kappa), &u) <= 1e-10);
    }

    #[test]
    fn chosen_kappa_keeps_margin(seed in any::<u64>(), n in 1usize..=8) {
        let mut fx = Fixtures::new(seed);
        let u = evolution_operator(&spec(fx.generator(n)), 1.0, 0.0).unwrap().propagator;
        let kappa = choose_kappa(&u).unwrap();
        prop_assert!(kappa != c(0.0, 0.0));
        let margin = 1e-3f64.max(1e-3 * u.frobenius_norm());
        let info = spectrum(&u.shifted(kappa)).unwrap();
        prop_assert!(info.min_distance_to_branch_cut >= margin);
        prop_assert_eq!(choose_kappa(&u).unwrap(), kappa);
    }

    #[test]
    fn reconstruction_ignores_kappa(seed in any::<u64>(), n in 1usize..=8) {
        let mut fx = Fixtures::new(seed);
        let g = spec(fx.generator(n));
        let u = evolution_operator(&g, 1.0, 0.0).unwrap().propagator;
        let kappas = admissible_kappas(&u).unwrap();
        prop_assume!(kappas.len() >= 2);
        let r1 = reconstruct_generator(&log_representation(&g, kappas[0], 1.0, 0.0).unwrap()).unwrap();
        let r2 = reconstruct_generator(&log_representation(&g, kappas[1], 1.0, 0.0).unwrap()).unwrap();
        prop_assert!(rel(&r1, &r2) <= 1e-8, "{:e}", rel(&r1, &r2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn analytic_derivative_matches_finite_differences(seed in any::<u64>(), n in 1usize..=5) {
        let mut fx = Fixtures::new(seed);
        let g = spec(fx.generator(n));
        let t = 1.0;
        let u = evolution_operator(&g, t, 0.0).unwrap().propagator;
        let kappa = choose_kappa(&u).unwrap();
        // the same κ must stay admissible across the stencil
        let near = [t - 1e-3, t + 1e-3].iter().all(|&tt| {
            let uu = evolution_operator(&g, tt, 0.0).unwrap().propagator;
            spectrum(&uu.shifted(kappa)).unwrap().min_distance_to_branch_cut >= 1e-3
        });
        prop_assume!(near);
        let rep = log_representation(&g, kappa, t, 0.0).unwrap();
        let fd = richardson_dalpha(&g, kappa, t, 1e-3);
        prop_assert!(rel(&fd, &rep.dalpha_dt) <= 1e-7, "{:e}", rel(&fd, &rep.dalpha_dt));
    }
}
