//! Small shared numerical helpers: quadrature, local polynomial
//! interpolation, and least-squares fits.
//!
//! Quadrature convention: grids on the half-line start at the first positive
//! node and the origin cell is closed with a zero value (trapezoid on the
//! zero-extended grid). This matches the discrete inner product under which
//! the transform and finite-difference operators are exactly orthogonal, so
//! norms, Gram matrices, and propagators all agree on one rule.

use num_complex::Complex64;

/// Trapezoid quadrature of samples `f` on a strictly increasing positive
/// `grid`, with the origin cell `[0, grid[0]]` closed by `f(0) = 0`.
pub fn quad_trapezoid(grid: &[f64], f: &[f64]) -> f64 {
    debug_assert_eq!(grid.len(), f.len());
    if grid.is_empty() {
        return 0.0;
    }
    let mut acc = 0.5 * grid[0] * f[0];
    for i in 1..grid.len() {
        acc += 0.5 * (grid[i] - grid[i - 1]) * (f[i] + f[i - 1]);
    }
    acc
}

/// Complex version of [`quad_trapezoid`].
pub fn quad_trapezoid_c(grid: &[f64], f: &[Complex64]) -> Complex64 {
    debug_assert_eq!(grid.len(), f.len());
    if grid.is_empty() {
        return Complex64::ZERO;
    }
    let mut acc = 0.5 * grid[0] * f[0];
    for i in 1..grid.len() {
        acc += 0.5 * (grid[i] - grid[i - 1]) * (f[i] + f[i - 1]);
    }
    acc
}

/// Composite Simpson rule on a uniform grid of spacing `h`.
///
/// Falls back to a trapezoid panel at the end when the sample count is even.
pub fn simpson_uniform(h: f64, f: &[f64]) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    let pairs = (n - 1) / 2;
    for p in 0..pairs {
        let i = 2 * p;
        acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    }
    if (n - 1) % 2 == 1 {
        acc += 0.5 * h * (f[n - 2] + f[n - 1]);
    }
    acc
}

/// Locate the index of the first grid node `>= x` (grid ascending).
fn lower_bound(grid: &[f64], x: f64) -> usize {
    grid.partition_point(|&g| g < x)
}

/// Local cubic (4-point Lagrange) interpolation of complex samples.
///
/// `x` must lie inside the grid span; the four nearest nodes are used.
pub fn interp_cubic(grid: &[f64], values: &[Complex64], x: f64) -> Complex64 {
    let n = grid.len();
    assert!(n >= 4, "cubic interpolation needs at least 4 nodes");
    let k = lower_bound(grid, x);
    let start = k.saturating_sub(2).min(n - 4);
    let xs = &grid[start..start + 4];
    let ys = &values[start..start + 4];
    let mut acc = Complex64::ZERO;
    for i in 0..4 {
        let mut w = 1.0;
        for j in 0..4 {
            if j != i {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += ys[i] * w;
    }
    acc
}

/// Derivative of the local cubic interpolant at `x`.
pub fn interp_cubic_deriv(grid: &[f64], values: &[Complex64], x: f64) -> Complex64 {
    let n = grid.len();
    assert!(n >= 4, "cubic interpolation needs at least 4 nodes");
    let k = lower_bound(grid, x);
    let start = k.saturating_sub(2).min(n - 4);
    let xs = &grid[start..start + 4];
    let ys = &values[start..start + 4];
    let mut acc = Complex64::ZERO;
    for i in 0..4 {
        // d/dx of the Lagrange basis polynomial i.
        let mut dw = 0.0;
        for m in 0..4 {
            if m == i {
                continue;
            }
            let mut term = 1.0 / (xs[i] - xs[m]);
            for j in 0..4 {
                if j != i && j != m {
                    term *= (x - xs[j]) / (xs[i] - xs[j]);
                }
            }
            dw += term;
        }
        acc += ys[i] * dw;
    }
    acc
}

/// Ordinary least squares line `y = a*x + b`; returns `(a, b, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let a = sxy / sxx;
    let b = my - a * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}

/// Least squares for `y ≈ a*f + b*g` with complex samples and two real basis
/// columns; returns `(a, b)` and the normal-matrix condition estimate.
pub fn lsq_two_basis(
    f: &[f64],
    g: &[f64],
    y: &[Complex64],
    weights: &[f64],
) -> (Complex64, Complex64, f64) {
    let mut sff = 0.0;
    let mut sgg = 0.0;
    let mut sfg = 0.0;
    let mut sfy = Complex64::ZERO;
    let mut sgy = Complex64::ZERO;
    for i in 0..f.len() {
        let w = weights[i];
        sff += w * f[i] * f[i];
        sgg += w * g[i] * g[i];
        sfg += w * f[i] * g[i];
        sfy += w * f[i] * y[i];
        sgy += w * g[i] * y[i];
    }
    let det = sff * sgg - sfg * sfg;
    let norm = sff.max(sgg);
    let cond = if det.abs() > 0.0 { norm * norm / det.abs() } else { f64::INFINITY };
    let a = (sgg * sfy - sfg * sgy) / det;
    let b = (sff * sgy - sfg * sfy) / det;
    (a, b, cond)
}

/// Relative difference |a - b| / max(|a|, |b|, floor).
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
