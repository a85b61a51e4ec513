//! Monte Carlo realization of the path-integral measures: discrete-time
//! Gaussian walks, absorbed at the origin (avoiding measure, Dirichlet) or
//! reflected off it (reflecting measure, Neumann), weighted by the
//! potential factor `Π_j e^{−τ V(z_j)/ħ}` along the way.
//!
//! Each slice draws a Gaussian increment of variance `2ħ t/n`. Under
//! absorption a path dies when it crosses zero — detected by sign change
//! *and*, between two surviving positive positions `a → b`, with the exact
//! Brownian-bridge crossing probability `e^{−ab/(ħτ)}`; this removes the
//! O(√τ) bias of sign checks alone, so the sampled marginal is exactly the
//! absorbed kernel when `V ≡ 0`. Reflection takes absolute values, which is
//! exact for the reflecting kernel.
//!
//! Sampling is chunked with per-chunk counter-based substreams of the
//! master seed and reduced in fixed chunk order, so results are
//! bit-identical for a given configuration regardless of thread count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ordering::{effective_potential, OrderingInfo, PhysicalConstants, ORDERING_TOL};

/// Boundary behavior of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McBoundary {
    /// Absorbed at the origin (avoiding measure).
    Dirichlet,
    /// Reflected off the origin (reflecting measure).
    Neumann,
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub ordering: OrderingInfo,
    pub constants: PhysicalConstants,
    pub bc: McBoundary,
    pub t_total: f64,
    pub n_slices: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub y0: f64,
}

/// Samples per deterministic substream chunk.
const CHUNK: usize = 8192;

impl McConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ordering: OrderingInfo,
        constants: PhysicalConstants,
        bc: McBoundary,
        t_total: f64,
        n_slices: usize,
        n_samples: usize,
        seed: u64,
        y0: f64,
    ) -> Result<Self> {
        if ordering.abs_j_plus() < 0.5 - ORDERING_TOL {
            return Err(Error::Regime(format!(
                "path sampling needs |J+| >= 1/2 (weights in (0,1]); got |J+| = {}",
                ordering.abs_j_plus()
            )));
        }
        if !(t_total > 0.0) {
            return Err(Error::Domain("t_total must be positive".into()));
        }
        if n_slices < 2 {
            return Err(Error::Domain("n_slices must be >= 2".into()));
        }
        if n_samples == 0 {
            return Err(Error::Domain("n_samples must be positive".into()));
        }
        if !(y0 > 0.0) {
            return Err(Error::Domain("y0 must be positive".into()));
        }
        Ok(Self { ordering, constants, bc, t_total, n_slices, n_samples, seed, y0 })
    }

    /// Potential slice time `τ = t/n`.
    pub fn tau(&self) -> f64 {
        self.t_total / self.n_slices as f64
    }

    /// Diffusion time per slice `s = ħ τ`; step variance is `2s`.
    pub fn slice_diffusion_time(&self) -> f64 {
        self.constants.hbar * self.tau()
    }
}

/// Weighted endpoint ensemble of surviving paths.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    /// Endpoints of surviving paths.
    pub endpoints: Vec<f64>,
    /// Potential weights `Π e^{−τV/ħ}` of the same paths.
    pub weights: Vec<f64>,
    /// Total number of sampled paths (including absorbed ones).
    pub n_total: usize,
}

impl PathEnsemble {
    /// Fraction of paths that survived absorption.
    pub fn survival_fraction(&self) -> f64 {
        self.endpoints.len() as f64 / self.n_total as f64
    }

    /// `Σ w / M`: the weighted analogue of the survival fraction; at most 1.
    pub fn total_weighted_mass(&self) -> f64 {
        self.weights.iter().sum::<f64>() / self.n_total as f64
    }
}

/// A Monte Carlo point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Kish effective sample size of the contributing weights.
    pub n_effective: usize,
}

fn walk_chunk(cfg: &McConfig, chunk_index: usize, count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk_index as u64 + 1);
    let tau = cfg.tau();
    let s = cfg.slice_diffusion_time();
    let step_sd = (2.0 * s).sqrt();
    let hbar = cfg.constants.hbar;
    let mut endpoints = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    'sample: for _ in 0..count {
        let mut y = cfg.y0;
        let mut w = 1.0f64;
        for _ in 0..cfg.n_slices {
            // Weight at the pre-step position: the product runs over the
            // slice positions z_1 … z_n, excluding the final endpoint.
            let v = effective_potential(&cfg.ordering, &cfg.constants, y)
                .expect("walk positions stay positive");
            w *= (-tau * v / hbar).exp();
            let xi: f64 = rng.sample(StandardNormal);
            let mut y_new = y + step_sd * xi;
            match cfg.bc {
                McBoundary::Dirichlet => {
                    if y_new <= 0.0 {
                        continue 'sample;
                    }
                    let p_cross = (-y * y_new / s).exp();
                    if rng.random::<f64>() < p_cross {
                        continue 'sample;
                    }
                }
                McBoundary::Neumann => {
                    y_new = y_new.abs();
                }
            }
            y = y_new;
        }
        endpoints.push(y);
        weights.push(w);
    }
    (endpoints, weights)
}

/// Sample the weighted endpoint ensemble.
pub fn sample_paths(cfg: &McConfig) -> Result<PathEnsemble> {
    let n_chunks = cfg.n_samples.div_ceil(CHUNK);
    let chunks: Vec<(Vec<f64>, Vec<f64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let count = CHUNK.min(cfg.n_samples - ci * CHUNK);
            walk_chunk(cfg, ci, count)
        })
        .collect();
    // Fixed chunk-order concatenation keeps results thread-count independent.
    let mut endpoints = Vec::with_capacity(cfg.n_samples);
    let mut weights = Vec::with_capacity(cfg.n_samples);
    for (e, w) in chunks {
        endpoints.extend(e);
        weights.extend(w);
    }
    Ok(PathEnsemble { endpoints, weights, n_total: cfg.n_samples })
}

/// Uniform endpoint bins on `[lo, hi)`.
#[derive(Debug, Clone, Copy)]
pub struct ZBins {
    pub lo: f64,
    pub hi: f64,
    pub n_bins: usize,
}

impl ZBins {
    pub fn new(lo: f64, hi: f64, n_bins: usize) -> Result<Self> {
        if !(hi > lo) || n_bins == 0 {
            return Err(Error::Domain(format!("bad bins [{lo}, {hi}) x {n_bins}")));
        }
        Ok(Self { lo, hi, n_bins })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.n_bins as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = self.width();
        (0..self.n_bins).map(|i| self.lo + (i as f64 + 0.5) * w).collect()
    }

    fn index(&self, y: f64) -> Option<usize> {
        if y < self.lo || y >= self.hi {
            return None;
        }
        let i = ((y - self.lo) / self.width()) as usize;
        Some(i.min(self.n_bins - 1))
    }
}

/// Binned kernel estimate: for each bin, the density estimator
/// `Σ_bin w / (M Δz)` with its standard error and effective sample count.
pub fn estimate_propagator(cfg: &McConfig, bins: &ZBins) -> Result<Vec<McEstimate>> {
    let ensemble = sample_paths(cfg)?;
    let m = ensemble.n_total as f64;
    let dz = bins.width();
    let mut sw = vec![0.0f64; bins.n_bins];
    let mut sw2 = vec![0.0f64; bins.n_bins];
    for (&y, &w) in ensemble.endpoints.iter().zip(&ensemble.weights) {
        if let Some(i) = bins.index(y) {
            sw[i] += w;
            sw2[i] += w * w;
        }
    }
    Ok((0..bins.n_bins)
        .map(|i| {
            let value = sw[i] / (m * dz);
            // Per-sample estimator X = w·1_bin/Δz (zero off-bin and for
            // absorbed paths).
            let var = (sw2[i] / (dz * dz) - m * value * value) / (m - 1.0).max(1.0);
            let std_error = (var.max(0.0) / m).sqrt();
            let n_effective = if sw2[i] > 0.0 {
                (sw[i] * sw[i] / sw2[i]).round() as usize
            } else {
                0
            };
            McEstimate { value, std_error, n_effective }
        })
        .collect())
}

/// Weight-averaged endpoint functional `Σ w f(y) / Σ w` with a
/// linearized (delta-method) standard error.
pub fn estimate_observable(cfg: &McConfig, f: impl Fn(f64) -> f64 + Sync) -> Result<McEstimate> {
    let ensemble = sample_paths(cfg)?;
    let sw: f64 = ensemble.weights.iter().sum();
    if sw == 0.0 {
        return Err(Error::Numerical("all paths absorbed or zero-weighted".into()));
    }
    let swf: f64 = ensemble
        .endpoints
        .iter()
        .zip(&ensemble.weights)
        .map(|(&y, &w)| w * f(y))
        .sum();
    let value = swf / sw;
    let mut var = 0.0;
    let mut sw2 = 0.0;
    for (&y, &w) in ensemble.endpoints.iter().zip(&ensemble.weights) {
        var += w * w * (f(y) - value) * (f(y) - value);
        sw2 += w * w;
    }
    let std_error = var.sqrt() / sw;
    let n_effective = (sw * sw / sw2).round() as usize;
    Ok(McEstimate { value, std_error, n_effective })
}
