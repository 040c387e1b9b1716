use num_complex::Complex64;
use proptest::prelude::*;

use miura_core::fixtures::Fixtures;
use miura_core::matfun::{
    expm, inverse, logm_principal, riesz_dunford, solve, spectrum, sqrtm_principal, Contour,
    ScalarFunction,
};
use miura_core::{ComplexMatrix, Error};

fn rel(a: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    a.distance(reference) / (1.0 + reference.frobenius_norm())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn exp_log_roundtrip_over_many_instances() {
    let mut fx = Fixtures::new(101);
    for _ in 0..100 {
        let n = fx.dim(16);
        let a = fx.log_admissible(n, 2.5, 0.2);
        let back = logm_principal(&expm(&a).unwrap()).unwrap();
        assert!(rel(&back, &a) <= 1e-9, "n = {n}: {:e}", rel(&back, &a));
    }
}

#[test]
fn expm_matches_eigendecomposition() {
    let mut fx = Fixtures::new(7);
    for _ in 0..10 {
        let (a, v, lambda) = fx.diagonalizable(8, |f| f.complex_normal());
        let exp_diag: Vec<Complex64> = lambda.iter().map(|z| z.exp()).collect();
        let oracle = &(&v * &ComplexMatrix::from_diagonal(&exp_diag)) * &inverse(&v).unwrap();
        let e = expm(&a).unwrap();
        assert!(e.distance(&oracle) / oracle.frobenius_norm() <= 1e-10);
    }
}

#[test]
fn sqrtm_matches_exp_of_half_log() {
    let mut fx = Fixtures::new(8);
    for _ in 0..10 {
        let g = fx.complex_matrix(8, 0.3);
        let m = &(&g * &g.adjoint()) + &ComplexMatrix::identity(8);
        let s = sqrtm_principal(&m).unwrap();
        assert!((&s * &s).distance(&m) / m.frobenius_norm() <= 1e-10);
        let oracle = expm(&logm_principal(&m).unwrap().scale_real(0.5)).unwrap();
        assert!(rel(&s, &oracle) <= 1e-10);
    }
}

#[test]
fn riesz_dunford_log_of_diagonal() {
    let m = ComplexMatrix::from_real_diagonal(&[2.0, 3.0]);
    let contour = Contour::new(c(2.5, 0.0), 1.0, 64).unwrap();
    let l = riesz_dunford(ScalarFunction::Log, &m, &contour).unwrap();
    let expected = ComplexMatrix::from_real_diagonal(&[2f64.ln(), 3f64.ln()]);
    assert!(l.distance(&expected) <= 1e-10);
}

#[test]
fn riesz_dunford_exp_of_zero() {
    let contour = Contour::new(c(0.0, 0.0), 1.0, 32).unwrap();
    let e = riesz_dunford(ScalarFunction::Exp, &ComplexMatrix::zeros(3), &contour).unwrap();
    assert!(e.distance(&ComplexMatrix::identity(3)) <= 1e-14);
}

#[test]
fn branch_cut_is_reported() {
    let m = ComplexMatrix::from_real_diagonal(&[-1.0, 2.0]);
    let info = spectrum(&m).unwrap();
    assert_eq!(info.min_distance_to_branch_cut, 0.0);
    assert!(matches!(logm_principal(&m), Err(Error::BranchCutViolation { .. })));
    assert!(matches!(sqrtm_principal(&m), Err(Error::BranchCutViolation { .. })));
}

#[test]
fn diagonal_inputs_are_exact() {
    let d = ComplexMatrix::from_diagonal(&[c(2f64.ln(), 0.0), c(0.0, std::f64::consts::FRAC_PI_2)]);
    let e = expm(&d).unwrap();
    assert!(e.distance(&ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(0.0, 1.0)])) <= 4.0 * f64::EPSILON);
    let l = logm_principal(&ComplexMatrix::from_real_diagonal(&[1f64.exp(), 2f64.exp()])).unwrap();
    assert!(l.distance(&ComplexMatrix::from_real_diagonal(&[1.0, 2.0])) <= 4.0 * f64::EPSILON);
    let s = sqrtm_principal(&ComplexMatrix::from_real_diagonal(&[4.0, 9.0])).unwrap();
    assert_eq!(s, ComplexMatrix::from_real_diagonal(&[2.0, 3.0]));
}

#[test]
fn singular_solve_carries_condition() {
    let m = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
    match solve(&m, &ComplexMatrix::identity(2)) {
        Err(Error::SingularMatrix { condition, .. }) => assert!(condition > 1e12),
        other => panic!("expected SingularMatrix, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sqrt_squares_back(seed in any::<u64>(), n in 1usize..=10) {
        let mut fx = Fixtures::new(seed);
        let m = fx.sectorial(n, 1.5, 0.1);
        let s = sqrtm_principal(&m).unwrap();
        prop_assert!((&s * &s).distance(&m) / m.frobenius_norm() <= 1e-10);
        for z in spectrum(&s).unwrap().eigenvalues {
            prop_assert!(z.re > 0.0);
        }
    }

    #[test]
    fn log_lands_in_principal_strip(seed in any::<u64>(), n in 1usize..=10) {
        let mut fx = Fixtures::new(seed);
        let m = fx.sectorial(n, 0.5, 0.05);
        let l = logm_principal(&m).unwrap();
        prop_assert!(rel(&expm(&l).unwrap(), &m) <= 1e-10);
        for z in spectrum(&l).unwrap().eigenvalues {
            prop_assert!(z.im.abs() < std::f64::consts::PI);
        }
    }

    #[test]
    fn commuting_exponentials_multiply(seed in any::<u64>(), n in 1usize..=8) {
        let mut fx = Fixtures::new(seed);
        let a = fx.complex_matrix(n, 0.5);
        let b = &(&a * &a).scale(c(0.3, -0.1)) + &a.scale(c(-0.7, 0.2));
        let lhs = expm(&(&a + &b)).unwrap();
        let rhs = &expm(&a).unwrap() * &expm(&b).unwrap();
        prop_assert!(rel(&lhs, &rhs) <= 1e-10);
    }

    #[test]
    fn expm_inverse_pair(seed in any::<u64>(), n in 1usize..=8) {
        let mut fx = Fixtures::new(seed);
        let a = fx.complex_matrix(n, 0.5);
        let prod = &expm(&a).unwrap() * &expm(&-&a).unwrap();
        prop_assert!(prod.distance(&ComplexMatrix::identity(n)) <= 1e-12 * n as f64 * (1.0 + a.frobenius_norm()).exp());
    }

    #[test]
    fn logm_agrees_with_contour(seed in any::<u64>(), n in 1usize..=6) {
        let mut fx = Fixtures::new(seed);
        let m = fx.sectorial(n, 3.0, 0.5);
        let contour = Contour::enclosing(&spectrum(&m).unwrap().eigenvalues, ScalarFunction::Log, 256).unwrap();
        let rd = riesz_dunford(ScalarFunction::Log, &m, &contour).unwrap();
        prop_assert!(rel(&logm_principal(&m).unwrap(), &rd) <= 1e-8);
    }

    #[test]
    fn solve_residual_is_small(seed in any::<u64>(), n in 1usize..=12) {
        let mut fx = Fixtures::new(seed);
        let m = fx.complex_matrix(n, 0.3).shifted(c(2.0, 0.0));
        let b = fx.complex_matrix(n, 1.0);
        let x = solve(&m, &b).unwrap();
        prop_assert!((&m * &x).distance(&b) <= 1e-12 * (1.0 + b.frobenius_norm()));
    }
}
