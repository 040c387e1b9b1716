//! Seeded random fixtures.
//!
//! All randomness flows through xoshiro256** seeded with `seed_from_u64`
//! (SplitMix64 expansion of the 64-bit seed), so a seed fully determines every
//! generated matrix and vector.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256StarStar;

use crate::matfun::spectrum::{distance_to_branch_cut, eigenvalues};
use crate::matrix::{ComplexMatrix, ComplexVector};

const MAX_REJECTIONS: usize = 10_000;

pub struct Fixtures {
    rng: Xoshiro256StarStar,
}

impl Fixtures {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    pub fn dim(&mut self, max: usize) -> usize {
        self.rng.random_range(1..=max)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Real and imaginary parts independent standard normals.
    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    pub fn complex_matrix(&mut self, n: usize, scale: f64) -> ComplexMatrix {
        let m = DMatrix::from_fn(n, n, |_, _| self.complex_normal() * scale);
        ComplexMatrix::new(m).expect("finite normal samples")
    }

    pub fn complex_vector(&mut self, n: usize) -> ComplexVector {
        ComplexVector::from_fn(n, |_, _| self.complex_normal())
    }

    /// Generator with unit-normal complex entries.
    pub fn generator(&mut self, n: usize) -> ComplexMatrix {
        self.complex_matrix(n, 1.0)
    }

    /// `G/√(2n) + shift·I`, resampled until every eigenvalue is at least
    /// `min_cut_distance` from (−∞, 0]. Non-normal in general.
    pub fn sectorial(&mut self, n: usize, shift: f64, min_cut_distance: f64) -> ComplexMatrix {
        let scale = 1.0 / (2.0 * n as f64).sqrt();
        for _ in 0..MAX_REJECTIONS {
            let m = self.complex_matrix(n, scale).shifted(Complex64::new(shift, 0.0));
            let ok = eigenvalues(&m)
                .map(|ev| {
                    ev.iter()
                        .all(|&z| distance_to_branch_cut(z) >= min_cut_distance)
                })
                .unwrap_or(false);
            if ok {
                return m;
            }
        }
        panic!("sectorial fixture rejected {MAX_REJECTIONS} times");
    }

    /// Matrix whose spectrum lies in the strip `|Im λ| < π − margin`, so that
    /// `log(exp(A)) = A` on the principal branch.
    pub fn log_admissible(&mut self, n: usize, radius: f64, margin: f64) -> ComplexMatrix {
        let scale = radius / (2.0 * n as f64).sqrt();
        for _ in 0..MAX_REJECTIONS {
            let m = self.complex_matrix(n, scale);
            let ok = eigenvalues(&m)
                .map(|ev| ev.iter().all(|z| z.im.abs() < std::f64::consts::PI - margin))
                .unwrap_or(false);
            if ok {
                return m;
            }
        }
        panic!("log-admissible fixture rejected {MAX_REJECTIONS} times");
    }

    /// `V diag(λ) V⁻¹` with a well-conditioned `V = I + ½G/√(2n)` and
    /// eigenvalues drawn by `eig`. Returns the matrix with its factors.
    pub fn diagonalizable(
        &mut self,
        n: usize,
        mut eig: impl FnMut(&mut Self) -> Complex64,
    ) -> (ComplexMatrix, ComplexMatrix, Vec<Complex64>) {
        let v = self
            .complex_matrix(n, 0.5 / (2.0 * n as f64).sqrt())
            .shifted(Complex64::new(1.0, 0.0));
        let lambda: Vec<Complex64> = (0..n).map(|_| eig(self)).collect();
        let v_inv = crate::matfun::inverse(&v).expect("perturbed identity is invertible");
        let a = &(&v * &ComplexMatrix::from_diagonal(&lambda)) * &v_inv;
        (a, v, lambda)
    }

    /// Point in the disk of the given center and radius.
    pub fn in_disk(&mut self, center: Complex64, radius: f64) -> Complex64 {
        let r = radius * self.uniform(0.0, 1.0).sqrt();
        let theta = self.uniform(0.0, 2.0 * std::f64::consts::PI);
        center + Complex64::from_polar(r, theta)
    }
}
