//! Finite-difference derivatives on uniform non-periodic grids.

use num_complex::Complex64;

/// Fornberg weights for the `order`-th derivative at `x0` from nodes `xs`.
pub fn fornberg_weights(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    // c[i][k]: weight of node i for the k-th derivative
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Stencil width: eighth-order accurate in the interior.
fn stencil_width(order: u32) -> usize {
    2 * (order as usize).div_ceil(2) + 7
}

/// `order`-th derivative with centered stencils, shifted inward at the ends.
pub fn derivative(values: &[Complex64], dx: f64, order: u32) -> Vec<Complex64> {
    let n = values.len();
    let w = stencil_width(order).min(n);
    let scale = dx.powi(order as i32);
    let mut out = Vec::with_capacity(n);
    let mut cached: Option<(isize, Vec<f64>)> = None;
    for j in 0..n {
        let start = j.saturating_sub(w / 2).min(n - w);
        let shift = j as isize - start as isize;
        let weights = match &cached {
            Some((s, wts)) if *s == shift => wts.clone(),
            _ => {
                let xs: Vec<f64> = (0..w).map(|i| i as f64 - shift as f64).collect();
                let wts = fornberg_weights(0.0, &xs, order as usize);
                cached = Some((shift, wts.clone()));
                wts
            }
        };
        let acc: Complex64 = weights
            .iter()
            .zip(&values[start..start + w])
            .map(|(&wt, &v)| v * wt)
            .sum();
        out.push(acc / scale);
    }
    out
}

/// Sixth-order Lagrange interpolation at `x_j + dx/2` for each interval.
pub fn midpoints(values: &[Complex64]) -> Vec<Complex64> {
    const W: usize = 6;
    let n = values.len();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut cached: Option<(usize, Vec<f64>)> = None;
    for j in 0..n - 1 {
        let start = j.saturating_sub(W / 2 - 1).min(n - W);
        let offset = j - start;
        let weights = match &cached {
            Some((o, wts)) if *o == offset => wts.clone(),
            _ => {
                let xs: Vec<f64> = (0..W).map(|i| i as f64).collect();
                let wts = fornberg_weights(offset as f64 + 0.5, &xs, 0);
                cached = Some((offset, wts.clone()));
                wts
            }
        };
        out.push(
            weights
                .iter()
                .zip(&values[start..start + W])
                .map(|(&wt, &v)| v * wt)
                .sum(),
        );
    }
    out
}
