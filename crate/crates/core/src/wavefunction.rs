//! Complex wave functions sampled on half-line grids, in either the curved
//! `l`-representation (`L²(ℝ⁺, l^{J−} dl)`) or the flat `y`-representation
//! (`L²(ℝ⁺, dy)`), together with the unitary maps between them.
//!
//! The two representations are related pointwise by
//!
//! ```text
//! ψ(y) = l^m Ψ(l),   l = y²/4,   m = 1/4 + J−/2,
//! ```
//!
//! which preserves inner products exactly in the continuum and to quadrature
//! accuracy on grids.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{interp_cubic, quad_trapezoid, quad_trapezoid_c};
use crate::ordering::{OrderingInfo, ORDERING_TOL};

/// Which Hilbert space the samples live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Representation {
    /// Curved representation with measure `l^{weight} dl`.
    CurvedL { weight: f64 },
    /// Flat representation with measure `dy`.
    FlatY,
}

/// Complex samples on a strictly increasing positive grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Vec<f64>,
    values: Vec<Complex64>,
    representation: Representation,
}

impl WaveFunction {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<Complex64>,
        representation: Representation,
    ) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Domain(format!(
                "grid length {} != values length {}",
                grid.len(),
                values.len()
            )));
        }
        if grid.is_empty() || grid[0] <= 0.0 {
            return Err(Error::Domain("grid must start at a positive point".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        let wf = Self { grid, values, representation };
        let n = wf.norm();
        if !n.is_finite() {
            return Err(Error::Domain("wave function norm is not finite".into()));
        }
        Ok(wf)
    }

    /// Build from a closure evaluated on the grid.
    pub fn from_fn(
        grid: Vec<f64>,
        representation: Representation,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values, representation)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Measure density at a grid point: `l^{weight}` in the curved
    /// representation, `1` in the flat one.
    fn measure(&self, x: f64) -> f64 {
        match self.representation {
            Representation::CurvedL { weight } => x.powf(weight),
            Representation::FlatY => 1.0,
        }
    }

    /// Squared norm under the representation's measure (trapezoid rule on
    /// the zero-extended grid).
    pub fn norm_sq(&self) -> f64 {
        let f: Vec<f64> = self
            .grid
            .iter()
            .zip(&self.values)
            .map(|(&x, v)| v.norm_sqr() * self.measure(x))
            .collect();
        quad_trapezoid(&self.grid, &f)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Inner product `⟨self, other⟩` (conjugate-linear in `self`). Requires
    /// matching grids and representations.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        if self.representation != other.representation {
            return Err(Error::RepresentationMismatch(
                "inner product between different representations".into(),
            ));
        }
        if self.grid.len() != other.grid.len()
            || self.grid.iter().zip(&other.grid).any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(Error::Domain("inner product requires matching grids".into()));
        }
        let f: Vec<Complex64> = self
            .grid
            .iter()
            .enumerate()
            .map(|(i, &x)| self.values[i].conj() * other.values[i] * self.measure(x))
            .collect();
        Ok(quad_trapezoid_c(&self.grid, &f))
    }

    /// Rescale so that the norm is 1.
    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for v in &mut self.values {
                *v /= n;
            }
        }
        self
    }
}

/// Map a curved-representation state onto a caller-supplied flat grid:
/// `ψ(y) = l^m Ψ(l)` with `l = y²/4`, resampling `Ψ` by cubic interpolation.
///
/// Every `y²/4` must lie inside the span of the curved grid. Inner products
/// are preserved to quadrature accuracy (exactly in the continuum).
pub fn to_flat(
    psi: &WaveFunction,
    ordering: &OrderingInfo,
    flat_grid: &[f64],
) -> Result<WaveFunction> {
    let weight = match psi.representation {
        Representation::CurvedL { weight } => weight,
        Representation::FlatY => {
            return Err(Error::RepresentationMismatch(
                "to_flat expects a curved-representation state".into(),
            ))
        }
    };
    if (weight - ordering.j_minus).abs() > ORDERING_TOL {
        return Err(Error::RepresentationMismatch(format!(
            "stored weight exponent {weight} != ordering J− = {}",
            ordering.j_minus
        )));
    }
    let (lo, hi) = (psi.grid[0], psi.grid[psi.grid.len() - 1]);
    let mut values = Vec::with_capacity(flat_grid.len());
    for &y in flat_grid {
        let l = 0.25 * y * y;
        if l < lo - 1e-15 || l > hi * (1.0 + 1e-15) {
            return Err(Error::Domain(format!(
                "flat node y = {y} maps to l = {l} outside the curved grid [{lo}, {hi}]"
            )));
        }
        let v = if psi.grid.len() >= 4 {
            interp_cubic(&psi.grid, &psi.values, l.clamp(lo, hi))
        } else {
            return Err(Error::Domain("need at least 4 curved samples".into()));
        };
        values.push(v * l.powf(ordering.m));
    }
    WaveFunction::new(flat_grid.to_vec(), values, Representation::FlatY)
}

/// Inverse of [`to_flat`]: `Ψ(l) = l^{−m} ψ(2√l)` resampled onto a curved
/// grid by cubic interpolation.
pub fn from_flat(
    psi: &WaveFunction,
    ordering: &OrderingInfo,
    curved_grid: &[f64],
) -> Result<WaveFunction> {
    if psi.representation != Representation::FlatY {
        return Err(Error::RepresentationMismatch(
            "from_flat expects a flat-representation state".into(),
        ));
    }
    let (lo, hi) = (psi.grid[0], psi.grid[psi.grid.len() - 1]);
    let mut values = Vec::with_capacity(curved_grid.len());
    for &l in curved_grid {
        if l <= 0.0 {
            return Err(Error::Domain("curved grid must be positive".into()));
        }
        let y = 2.0 * l.sqrt();
        if y < lo - 1e-15 || y > hi * (1.0 + 1e-15) {
            return Err(Error::Domain(format!(
                "curved node l = {l} maps to y = {y} outside the flat grid [{lo}, {hi}]"
            )));
        }
        let v = interp_cubic(&psi.grid, &psi.values, y.clamp(lo, hi));
        values.push(v * l.powf(-ordering.m));
    }
    WaveFunction::new(
        curved_grid.to_vec(),
        values,
        Representation::CurvedL { weight: ordering.j_minus },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::classify;

    /// Matched pair built on a uniform flat grid: curved nodes l_i = y_i²/4,
    /// so resampling is node-exact in both directions.
    fn matched_grids(n: usize, l_max: f64) -> (Vec<f64>, Vec<f64>) {
        let y_max = 2.0 * l_max.sqrt();
        let yg: Vec<f64> = (1..=n).map(|i| y_max * i as f64 / n as f64).collect();
        let lg = yg.iter().map(|&y| 0.25 * y * y).collect();
        (lg, yg)
    }

    #[test]
    fn pointwise_map_matches_symbolic_substitution() {
        // Ψ(l) = e^{−l}, J− = 0  →  ψ(y) = (y²/4)^{1/4} e^{−y²/4}.
        let o = classify(0.5, 0.0, 0.5).unwrap(); // J− = 0, m = 1/4
        let (lg, yg) = matched_grids(400, 12.0);
        let psi = WaveFunction::from_fn(lg, Representation::CurvedL { weight: 0.0 }, |l| {
            Complex64::new((-l).exp(), 0.0)
        })
        .unwrap();
        let flat = to_flat(&psi, &o, &yg).unwrap();
        for (i, &y) in yg.iter().enumerate() {
            let l = 0.25 * y * y;
            let expect = l.powf(0.25) * (-l).exp();
            assert!(
                (flat.values()[i].re - expect).abs() < 1e-12,
                "pointwise mismatch at y = {y}"
            );
        }
    }

    #[test]
    fn norm_preserved_on_matched_grids() {
        // Smooth data decaying at both ends of the grid.
        let o = classify(0.4, 0.3, 0.3).unwrap(); // J− = −0.1
        let (lg, yg) = matched_grids(3000, 14.0);
        let psi = WaveFunction::from_fn(
            lg,
            Representation::CurvedL { weight: o.j_minus },
            |l| Complex64::new(l * (-l).exp(), 0.3 * l * l * (-1.5 * l).exp()),
        )
        .unwrap();
        let flat = to_flat(&psi, &o, &yg).unwrap();
        assert!(
            (flat.norm() - psi.norm()).abs() <= 1e-10 * psi.norm(),
            "norm drift {} vs {}",
            flat.norm(),
            psi.norm()
        );
    }

    #[test]
    fn round_trip_is_identity_on_nodes() {
        let o = classify(0.5, 0.5, 0.0).unwrap();
        let (lg, yg) = matched_grids(500, 10.0);
        let psi = WaveFunction::from_fn(
            lg.clone(),
            Representation::CurvedL { weight: o.j_minus },
            |l| Complex64::new((-l).exp() * l, (-0.5 * l).exp() * 0.2),
        )
        .unwrap();
        let back = from_flat(&to_flat(&psi, &o, &yg).unwrap(), &o, &lg).unwrap();
        for (a, b) in psi.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn weight_mismatch_is_rejected() {
        let o = classify(0.5, 0.0, 0.5).unwrap(); // J− = 0
        let (lg, yg) = matched_grids(100, 5.0);
        let psi = WaveFunction::from_fn(lg, Representation::CurvedL { weight: 0.7 }, |l| {
            Complex64::new((-l).exp(), 0.0)
        })
        .unwrap();
        assert!(matches!(
            to_flat(&psi, &o, &yg),
            Err(Error::RepresentationMismatch(_))
        ));
    }

    #[test]
    fn inner_products_preserved_between_state_pairs() {
        let o = classify(0.5, 0.5, 0.0).unwrap(); // J− = −1/2
        let (lg, yg) = matched_grids(3000, 14.0);
        let rep = Representation::CurvedL { weight: o.j_minus };
        let a = WaveFunction::from_fn(lg.clone(), rep, |l| {
            Complex64::new(l * (-l).exp(), 0.1 * l.powi(2) * (-l).exp())
        })
        .unwrap();
        let b = WaveFunction::from_fn(lg, rep, |l| {
            Complex64::new(l.powi(2) * (-2.0 * l).exp(), -0.4 * l * (-l).exp())
        })
        .unwrap();
        let ip_curved = a.inner(&b).unwrap();
        let fa = to_flat(&a, &o, &yg).unwrap();
        let fb = to_flat(&b, &o, &yg).unwrap();
        let ip_flat = fa.inner(&fb).unwrap();
        assert!((ip_curved - ip_flat).norm() < 1e-10 * ip_curved.norm().max(1.0));
    }
}
