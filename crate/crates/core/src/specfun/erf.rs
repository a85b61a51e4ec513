//! Complementary error function of complex argument, plus the scaled
//! variant `erfcx(z) = e^{z²} erfc(z)` that the Robin kernels need to avoid
//! overflow.
//!
//! Everything routes through the Faddeeva function `w(ζ) = e^{−ζ²} erfc(−iζ)`
//! evaluated with Weideman's rational approximation in the closed upper
//! half-plane (a single 40-term polynomial in the Möbius variable
//! `(L+iζ)/(L−iζ)`; uniform relative error ≲ 1e−14). The right half-plane
//! identity `erfcx(z) = w(iz)` and the reflection `erfc(−z) = 2 − erfc(z)`
//! cover the rest of the plane.

use std::sync::OnceLock;

use num_complex::Complex64;

const N_TERMS: usize = 40;

struct WeidemanTable {
    l: f64,
    /// Polynomial coefficients, highest degree first (for Horner).
    a: [f64; N_TERMS],
}

fn table() -> &'static WeidemanTable {
    static TABLE: OnceLock<WeidemanTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = N_TERMS;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = ((n as f64) / std::f64::consts::SQRT_2).sqrt();
        // Sampled function on the Möbius-mapped circle, fftshifted.
        let mut f = vec![0.0f64; m2];
        for (idx, k) in (-(m as i64 - 1)..m as i64).enumerate() {
            let theta = k as f64 * std::f64::consts::PI / m as f64;
            let t = l * (0.5 * theta).tan();
            f[idx + 1] = (-t * t).exp() * (l * l + t * t);
        }
        let mut shifted = vec![0.0f64; m2];
        for (i, s) in shifted.iter_mut().enumerate() {
            *s = f[(i + m) % m2];
        }
        // Real part of the DFT, coefficients 1..=n, reversed for Horner.
        let mut a = [0.0f64; N_TERMS];
        for k in 1..=n {
            let mut acc = 0.0;
            for (i, &s) in shifted.iter().enumerate() {
                acc += s * (2.0 * std::f64::consts::PI * (k * i) as f64 / m2 as f64).cos();
            }
            a[n - k] = acc / m2 as f64;
        }
        WeidemanTable { l, a }
    })
}

/// Faddeeva function `w(ζ)` for `Im ζ ≥ 0`.
pub fn faddeeva_upper(zeta: Complex64) -> Complex64 {
    debug_assert!(zeta.im >= -1e-15, "faddeeva_upper needs Im ζ ≥ 0");
    let tbl = table();
    let l = tbl.l;
    let iz = Complex64::new(-zeta.im, zeta.re); // iζ
    let denom = l - iz;
    let zmap = (l + iz) / denom;
    let mut p = Complex64::ZERO;
    for &c in tbl.a.iter() {
        p = p * zmap + c;
    }
    2.0 * p / (denom * denom) + 1.0 / (std::f64::consts::PI.sqrt() * denom)
}

/// Scaled complementary error function `erfcx(z) = e^{z²} erfc(z)` for any
/// finite `z`; uses `erfcx(z) = w(iz)` in the right half-plane and the
/// reflection `erfcx(−z) = 2 e^{z²} − erfcx(z)` otherwise.
pub fn erfcx_complex(z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        faddeeva_upper(Complex64::new(-z.im, z.re))
    } else {
        let pos = faddeeva_upper(Complex64::new(z.im, -z.re));
        2.0 * (z * z).exp() - pos
    }
}

/// Real scaled complementary error function.
pub fn erfcx_real(x: f64) -> f64 {
    erfcx_complex(Complex64::new(x, 0.0)).re
}

/// Complementary error function of complex argument.
///
/// Relative accuracy better than 1e−12 for `|z| ≤ 20`; satisfies
/// `erfc(z) + erfc(−z) = 2` by construction.
pub fn erfc_complex(z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        (-z * z).exp() * erfcx_complex(z)
    } else {
        // erfc(z) = 2 − erfc(−z), with −z in the right half-plane.
        2.0 - (-z * z).exp() * erfcx_complex(-z)
    }
}

/// Real complementary error function.
pub fn erfc_real(x: f64) -> f64 {
    erfc_complex(Complex64::new(x, 0.0)).re
}
