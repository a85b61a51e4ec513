//! Time-sliced propagation on a half-line grid: the product
//! `(e^{−tT/ħn} e^{−tV/ħn})^n` applied to a state, read right-to-left, so
//! each slice multiplies by the potential factor pointwise and then applies
//! the boundary-condition-resolved free kernel `e^{τΔ}` (imaginary time,
//! `τ = ħt/n`) or `e^{iτΔ}` (real time).
//!
//! Kinetic factors can be applied through an explicit kernel matrix with
//! quadrature weights or through exactly orthogonal trigonometric
//! transforms (sine for Dirichlet, shifted cosine for Neumann, improper
//! Robin eigenfunctions by quadrature). Real-time propagation should use
//! the transform routes; oscillatory kernel quadrature is exposed for
//! diagnostics only.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extensions::{BcKind, BoundaryCondition};
use crate::kernels::{heat_dirichlet, heat_neumann, heat_robin, schro_dirichlet, schro_neumann,
                     schro_robin, TimeMode};
use crate::numerics::{linear_fit, quad_trapezoid};
use crate::ordering::{effective_potential, OrderingInfo, PhysicalConstants, ORDERING_TOL};
use crate::spectral::{spectral_propagate, SpectralBasis};
use crate::wavefunction::{Representation, WaveFunction};

/// Uniform half-line grid: `n_points` nodes at `h, 2h, …, y_max` with
/// `h = y_max / n_points`; the origin is excluded and the far end carries a
/// Dirichlet closure regardless of the boundary condition at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub y_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(y_max: f64, n_points: usize) -> Result<Self> {
        if !(y_max > 0.0) {
            return Err(Error::Domain(format!("y_max must be positive, got {y_max}")));
        }
        if n_points < 64 {
            return Err(Error::Domain(format!("n_points must be >= 64, got {n_points}")));
        }
        Ok(Self { y_max, n_points })
    }

    pub fn h(&self) -> f64 {
        self.y_max / self.n_points as f64
    }

    pub fn build(&self) -> Vec<f64> {
        let h = self.h();
        (1..=self.n_points).map(|j| j as f64 * h).collect()
    }
}

/// How the kinetic factor is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticMethod {
    /// Quadrature-weighted kernel matrix (any boundary condition).
    KernelMatrix,
    /// Exact sine-transform diagonalization (Dirichlet).
    SineTransform,
    /// Shifted cosine transform (Neumann; the zero-slope node sits at h/2).
    CosineTransform,
    /// Quadrature over the improper Robin eigenfunctions
    /// `ψ_p(y) = √(2/π) cos(py + φ_p)`, `tan φ_p = −1/(pβ)`.
    RobinEigenQuadrature,
}

/// A validated propagation plan.
#[derive(Debug, Clone, Copy)]
pub struct TrotterPlan {
    pub ordering: OrderingInfo,
    pub constants: PhysicalConstants,
    pub bc: BoundaryCondition,
    pub grid: GridSpec,
    pub t_total: f64,
    pub n_slices: usize,
    pub time_mode: TimeMode,
    pub kinetic_method: KineticMethod,
    /// Width of the near-origin window tracked in the diagnostics.
    pub near_zero_eps: f64,
}

impl TrotterPlan {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ordering: OrderingInfo,
        constants: PhysicalConstants,
        bc: BoundaryCondition,
        grid: GridSpec,
        t_total: f64,
        n_slices: usize,
        time_mode: TimeMode,
        kinetic_method: KineticMethod,
    ) -> Result<Self> {
        if !(t_total > 0.0) {
            return Err(Error::Domain(format!("t_total must be positive, got {t_total}")));
        }
        if n_slices == 0 {
            return Err(Error::Domain("n_slices must be >= 1".into()));
        }
        let plan = Self {
            ordering,
            constants,
            bc,
            grid,
            t_total,
            n_slices,
            time_mode,
            kinetic_method,
            near_zero_eps: 0.5,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_near_zero_eps(mut self, eps: f64) -> Self {
        self.near_zero_eps = eps;
        self
    }

    pub fn with_n_slices(mut self, n: usize) -> Self {
        self.n_slices = n;
        self
    }

    /// Regime and method gates for time-sliced propagation.
    pub fn validate(&self) -> Result<()> {
        let a = self.ordering.abs_j_plus();
        if a < 0.5 - ORDERING_TOL {
            return Err(Error::Regime(format!(
                "time slicing needs |J+| >= 1/2 (nonnegative potential); got |J+| = {a}"
            )));
        }
        let kind = self.bc.kind();
        if a > 0.5 + ORDERING_TOL && kind != BcKind::Dirichlet {
            return Err(Error::Regime(format!(
                "for |J+| > 1/2 the form sum selects the Dirichlet extension; got {kind:?}"
            )));
        }
        if kind == BcKind::General {
            return Err(Error::Regime(
                "general-angle boundary conditions do not define a free-kernel factorization; \
                 use Dirichlet/Neumann/Robin"
                    .into(),
            ));
        }
        match (self.kinetic_method, kind) {
            (KineticMethod::SineTransform, BcKind::Dirichlet) => {}
            (KineticMethod::CosineTransform, BcKind::Neumann) => {}
            (KineticMethod::RobinEigenQuadrature, BcKind::Robin) => {}
            (KineticMethod::KernelMatrix, _) => {}
            (m, k) => {
                return Err(Error::MethodMismatch(format!(
                    "{m:?} does not apply the {k:?} boundary condition"
                )))
            }
        }
        Ok(())
    }

    /// Kinetic slice time `ħ t / n`.
    pub fn kinetic_tau(&self) -> f64 {
        self.constants.hbar * self.t_total / self.n_slices as f64
    }

    /// Potential slice time `t / n`.
    pub fn potential_tau(&self) -> f64 {
        self.t_total / self.n_slices as f64
    }
}

/// Compiled one-slice kinetic operator on a fixed grid.
enum KineticOp {
    DenseReal(Vec<f64>),
    DenseComplex(Vec<Complex64>),
    /// Sine basis over interior nodes (wall pinned at the last node).
    Sine { basis: Vec<f64>, mult: Vec<Complex64>, m: usize },
    /// Shifted cosine basis over all nodes.
    Cosine { basis: Vec<f64>, mult: Vec<Complex64> },
    /// Robin eigenfunction table: `modes[k*n + j] = ψ_{p_k}(y_j)`, boundary
    /// samples `ψ_{p_k}(0)`, and the mode multipliers.
    RobinQuad {
        modes: Vec<f64>,
        at_zero: Vec<f64>,
        mult: Vec<Complex64>,
        dp: f64,
        beta: f64,
    },
}

struct CompiledKinetic {
    op: KineticOp,
    n: usize,
    h: f64,
}

fn dense_matvec_real(m: &[f64], n: usize, v: &[Complex64]) -> Vec<Complex64> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let row = &m[i * n..(i + 1) * n];
            let mut acc = Complex64::ZERO;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            acc
        })
        .collect()
}

fn dense_matvec_complex(m: &[Complex64], n: usize, v: &[Complex64]) -> Vec<Complex64> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let row = &m[i * n..(i + 1) * n];
            let mut acc = Complex64::ZERO;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            acc
        })
        .collect()
}

/// Extrapolated boundary value from the first two nodes under
/// `ψ(0) = β ψ'(0)`: a quadratic fit gives `ψ(0) = (4ψ₁ − ψ₂)/(3 + 2h/β)`.
fn boundary_value_weights(h: f64, beta: f64) -> (f64, f64) {
    if beta == 0.0 {
        return (0.0, 0.0);
    }
    let denom = if beta.is_infinite() { 3.0 } else { 3.0 + 2.0 * h / beta };
    (4.0 / denom, -1.0 / denom)
}

impl CompiledKinetic {
    fn build(
        grid: &GridSpec,
        tau: f64,
        bc: &BoundaryCondition,
        time_mode: TimeMode,
        method: KineticMethod,
    ) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::Domain(format!("kinetic tau must be positive, got {tau}")));
        }
        let n = grid.n_points;
        let h = grid.h();
        let y_max = grid.y_max;
        let beta = bc.beta().ok_or_else(|| {
            Error::MethodMismatch("kinetic factor needs a Dirichlet/Neumann/Robin condition".into())
        })?;
        let op = match method {
            KineticMethod::SineTransform => {
                if bc.kind() != BcKind::Dirichlet {
                    return Err(Error::MethodMismatch(
                        "SineTransform applies the Dirichlet condition only".into(),
                    ));
                }
                let m = n - 1;
                let mut basis = vec![0.0f64; m * m];
                for k in 0..m {
                    for j in 0..m {
                        basis[k * m + j] =
                            (std::f64::consts::PI * (k + 1) as f64 * (j + 1) as f64 / n as f64)
                                .sin();
                    }
                }
                let mult = (1..=m)
                    .map(|k| {
                        let wave = std::f64::consts::PI * k as f64 / y_max;
                        phase_factor(time_mode, tau * wave * wave)
                    })
                    .collect();
                KineticOp::Sine { basis, mult, m }
            }
            KineticMethod::CosineTransform => {
                if bc.kind() != BcKind::Neumann {
                    return Err(Error::MethodMismatch(
                        "CosineTransform applies the Neumann condition only".into(),
                    ));
                }
                let mut basis = vec![0.0f64; n * n];
                for k in 0..n {
                    for j in 0..n {
                        basis[k * n + j] = (std::f64::consts::PI
                            * (k as f64 + 0.5)
                            * (j as f64 + 0.5)
                            / n as f64)
                            .cos();
                    }
                }
                let mult = (0..n)
                    .map(|k| {
                        let wave = std::f64::consts::PI * (k as f64 + 0.5) / y_max;
                        phase_factor(time_mode, tau * wave * wave)
                    })
                    .collect();
                KineticOp::Cosine { basis, mult }
            }
            KineticMethod::RobinEigenQuadrature => {
                if bc.kind() != BcKind::Robin {
                    return Err(Error::MethodMismatch(
                        "RobinEigenQuadrature needs a finite Robin parameter".into(),
                    ));
                }
                let kmax = 4 * n;
                let dp = std::f64::consts::PI / h / kmax as f64;
                let norm = (2.0 / std::f64::consts::PI).sqrt();
                let mut modes = vec![0.0f64; kmax * n];
                let mut at_zero = vec![0.0f64; kmax];
                let mut mult = Vec::with_capacity(kmax);
                for k in 0..kmax {
                    let p = (k as f64 + 0.5) * dp;
                    let phi = (-1.0 / (p * beta)).atan();
                    for j in 0..n {
                        let y = (j + 1) as f64 * h;
                        modes[k * n + j] = norm * (p * y + phi).cos();
                    }
                    at_zero[k] = norm * phi.cos();
                    mult.push(phase_factor(time_mode, tau * p * p));
                }
                KineticOp::RobinQuad { modes, at_zero, mult, dp, beta }
            }
            KineticMethod::KernelMatrix => {
                let grid_pts = grid.build();
                let (w0, w1) = boundary_value_weights(h, beta);
                match time_mode {
                    TimeMode::Imaginary => {
                        let mut m = vec![0.0f64; n * n];
                        for i in 0..n {
                            let yi = grid_pts[i];
                            let k0 = heat_kernel_dispatch(beta, tau, yi, 0.0)?;
                            for j in 0..n {
                                let mut v = h * heat_kernel_dispatch(beta, tau, yi, grid_pts[j])?;
                                // Origin half-cell with the extrapolated ψ(0).
                                if j == 0 {
                                    v += 0.5 * h * k0 * w0;
                                } else if j == 1 {
                                    v += 0.5 * h * k0 * w1;
                                }
                                m[i * n + j] = v;
                            }
                        }
                        KineticOp::DenseReal(m)
                    }
                    TimeMode::Real => {
                        let mut m = vec![Complex64::ZERO; n * n];
                        for i in 0..n {
                            let yi = grid_pts[i];
                            let k0 = schro_kernel_dispatch(beta, tau, yi, 0.0)?;
                            for j in 0..n {
                                let mut v = schro_kernel_dispatch(beta, tau, yi, grid_pts[j])? * h;
                                if j == 0 {
                                    v += 0.5 * h * k0 * w0;
                                } else if j == 1 {
                                    v += 0.5 * h * k0 * w1;
                                }
                                m[i * n + j] = v;
                            }
                        }
                        KineticOp::DenseComplex(m)
                    }
                }
            }
        };
        Ok(Self { op, n, h })
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match &self.op {
            KineticOp::DenseReal(m) => dense_matvec_real(m, self.n, v),
            KineticOp::DenseComplex(m) => dense_matvec_complex(m, self.n, v),
            KineticOp::Sine { basis, mult, m } => {
                let interior = &v[..*m];
                let mut coeff = dense_matvec_real(basis, *m, interior);
                let scale = 2.0 / (self.n as f64);
                for (c, f) in coeff.iter_mut().zip(mult) {
                    *c *= scale * f;
                }
                let mut out = dense_matvec_real(basis, *m, &coeff);
                out.push(Complex64::ZERO); // wall node
                out
            }
            KineticOp::Cosine { basis, mult } => {
                let mut coeff = dense_matvec_real(basis, self.n, v);
                let scale = 2.0 / (self.n as f64);
                for (c, f) in coeff.iter_mut().zip(mult) {
                    *c *= scale * f;
                }
                dense_matvec_real(basis, self.n, &coeff)
            }
            KineticOp::RobinQuad { modes, at_zero, mult, dp, beta } => {
                let n = self.n;
                let (w0, w1) = boundary_value_weights(self.h, *beta);
                let psi0 = w0 * v[0] + w1 * v[1];
                let k = mult.len();
                let coeff: Vec<Complex64> = (0..k)
                    .into_par_iter()
                    .map(|ki| {
                        let row = &modes[ki * n..(ki + 1) * n];
                        let mut acc = Complex64::ZERO;
                        for (a, b) in row.iter().zip(v) {
                            acc += a * b;
                        }
                        // Trapezoid on [0, ∞) with the Euler–Maclaurin slope
                        // correction at the origin; (ψ_p ψ)'(0) =
                        // 2 ψ_p(0) ψ(0)/β since both factors satisfy the
                        // Robin condition.
                        let slope0 = 2.0 * at_zero[ki] * psi0 / *beta;
                        (acc * self.h + 0.5 * self.h * at_zero[ki] * psi0
                            - self.h * self.h / 12.0 * slope0)
                            * mult[ki]
                    })
                    .collect();
                (0..n)
                    .into_par_iter()
                    .map(|j| {
                        let mut acc = Complex64::ZERO;
                        for (ki, c) in coeff.iter().enumerate() {
                            acc += modes[ki * n + j] * c;
                        }
                        acc * *dp
                    })
                    .collect()
            }
        }
    }
}

fn phase_factor(mode: TimeMode, x: f64) -> Complex64 {
    match mode {
        TimeMode::Imaginary => Complex64::new((-x).exp(), 0.0),
        TimeMode::Real => Complex64::new(0.0, -x).exp(),
    }
}

fn heat_kernel_dispatch(beta: f64, t: f64, y: f64, z: f64) -> Result<f64> {
    if beta == 0.0 {
        heat_dirichlet(t, y, z)
    } else if beta.is_infinite() {
        heat_neumann(t, y, z)
    } else {
        heat_robin(beta, t, y, z)
    }
}

fn schro_kernel_dispatch(beta: f64, t: f64, y: f64, z: f64) -> Result<Complex64> {
    if beta == 0.0 {
        schro_dirichlet(t, y, z)
    } else if beta.is_infinite() {
        schro_neumann(t, y, z)
    } else {
        schro_robin(beta, t, y, z)
    }
}

fn require_flat_on_grid(psi: &WaveFunction, grid: &GridSpec) -> Result<()> {
    if psi.representation() != Representation::FlatY {
        return Err(Error::RepresentationMismatch(
            "propagation operates in the flat representation".into(),
        ));
    }
    let g = grid.build();
    if psi.grid().len() != g.len()
        || psi.grid().iter().zip(&g).any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::Domain("state is not sampled on the plan's grid".into()));
    }
    Ok(())
}

/// Apply one kinetic factor `e^{τΔ}` (imaginary) or `e^{iτΔ}` (real) with
/// the given boundary condition; `tau` is the kinetic slice time `ħt/n`.
pub fn apply_kinetic(
    psi: &WaveFunction,
    tau: f64,
    grid: &GridSpec,
    bc: &BoundaryCondition,
    time_mode: TimeMode,
    method: KineticMethod,
) -> Result<WaveFunction> {
    require_flat_on_grid(psi, grid)?;
    let op = CompiledKinetic::build(grid, tau, bc, time_mode, method)?;
    let out = op.apply(psi.values());
    WaveFunction::new(psi.grid().to_vec(), out, Representation::FlatY)
}

/// Pointwise potential factor `e^{−τV/ħ}` (imaginary) or `e^{−iτV/ħ}`
/// (real); `tau` is the potential slice time `t/n`. Requires `|J+| ≥ 1/2`
/// so that `V ≥ 0`.
pub fn apply_potential(
    psi: &WaveFunction,
    tau: f64,
    ordering: &OrderingInfo,
    constants: &PhysicalConstants,
    time_mode: TimeMode,
) -> Result<WaveFunction> {
    if ordering.abs_j_plus() < 0.5 - ORDERING_TOL {
        return Err(Error::Regime(format!(
            "potential factor needs |J+| >= 1/2 (V >= 0); got |J+| = {}",
            ordering.abs_j_plus()
        )));
    }
    let mut out = psi.values().to_vec();
    for (v, &y) in out.iter_mut().zip(psi.grid()) {
        let pot = effective_potential(ordering, constants, y)?;
        *v *= phase_factor(time_mode, tau * pot / constants.hbar);
    }
    WaveFunction::new(psi.grid().to_vec(), out, Representation::FlatY)
}

/// Per-slice diagnostics of a Trotter run.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    /// Norm after each slice.
    pub norms: Vec<f64>,
    /// `∫₀^ε |ψ|² dy` after each slice.
    pub prob_near_zero: Vec<f64>,
    /// Set when the real-time phase step `τ V(h)/ħ` exceeded π/4 (aliasing
    /// risk at the first grid node).
    pub phase_guard: Option<String>,
}

/// Run the full time-sliced product. Returns the final state and per-slice
/// diagnostics.
pub fn trotter_evolve(
    psi0: &WaveFunction,
    plan: &TrotterPlan,
) -> Result<(WaveFunction, Diagnostics)> {
    plan.validate()?;
    require_flat_on_grid(psi0, &plan.grid)?;
    let kinetic = CompiledKinetic::build(
        &plan.grid,
        plan.kinetic_tau(),
        &plan.bc,
        plan.time_mode,
        plan.kinetic_method,
    )?;
    let grid = psi0.grid().to_vec();
    let tau_pot = plan.potential_tau();
    let pot: Vec<Complex64> = grid
        .iter()
        .map(|&y| {
            effective_potential(&plan.ordering, &plan.constants, y)
                .map(|v| phase_factor(plan.time_mode, tau_pot * v / plan.constants.hbar))
        })
        .collect::<Result<_>>()?;

    let mut phase_guard = None;
    if plan.time_mode == TimeMode::Real {
        let v1 = effective_potential(&plan.ordering, &plan.constants, grid[0])?;
        let step = tau_pot * v1 / plan.constants.hbar;
        if step > std::f64::consts::FRAC_PI_4 {
            let msg = format!(
                "real-time phase step tau*V(h)/hbar = {step:.3} exceeds pi/4 at the first grid \
                 node; increase n_slices or the grid spacing"
            );
            log::warn!("{msg}");
            phase_guard = Some(msg);
        }
    }

    let mut values = psi0.values().to_vec();
    let mut norms = Vec::with_capacity(plan.n_slices);
    let mut prob0 = Vec::with_capacity(plan.n_slices);
    for _ in 0..plan.n_slices {
        for (v, p) in values.iter_mut().zip(&pot) {
            *v *= p;
        }
        values = kinetic.apply(&values);
        let dens: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
        norms.push(quad_trapezoid(&grid, &dens).sqrt());
        let cut = grid.partition_point(|&y| y <= plan.near_zero_eps);
        prob0.push(if cut == 0 { 0.0 } else { quad_trapezoid(&grid[..cut], &dens[..cut]) });
    }
    let out = WaveFunction::new(grid, values, Representation::FlatY)?;
    Ok((out, Diagnostics { norms, prob_near_zero: prob0, phase_guard }))
}

/// Simple state observables under the flat measure.
#[derive(Debug, Clone, Copy)]
pub struct Observables {
    pub norm: f64,
    pub mean_y: f64,
    pub prob_near_zero: f64,
}

/// Trapezoid-quadrature norm, position mean, and near-origin probability
/// `∫₀^ε |ψ|² dy` (grid-truncated).
pub fn observables(psi: &WaveFunction, eps: f64) -> Observables {
    let grid = psi.grid();
    let dens: Vec<f64> = psi.values().iter().map(|v| v.norm_sqr()).collect();
    let norm_sq = quad_trapezoid(grid, &dens);
    let weighted: Vec<f64> = dens.iter().zip(grid).map(|(d, &y)| d * y).collect();
    let mean = quad_trapezoid(grid, &weighted) / norm_sq.max(f64::MIN_POSITIVE);
    let cut = grid.partition_point(|&y| y <= eps);
    let prob = if cut == 0 { 0.0 } else { quad_trapezoid(&grid[..cut], &dens[..cut]) };
    Observables { norm: norm_sq.sqrt(), mean_y: mean, prob_near_zero: prob }
}

/// One row of a convergence study.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub n_slices: usize,
    pub l2_error: f64,
}

/// L² errors of the sliced product against the spectral oracle, with the
/// fitted order (−slope of ln e against ln n).
#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub fitted_order: f64,
}

/// Run the sliced product for each `n` and compare with
/// [`spectral_propagate`] at the plan's total time.
pub fn convergence_study(
    psi0: &WaveFunction,
    plan_base: &TrotterPlan,
    n_list: &[usize],
    oracle: &SpectralBasis,
) -> Result<ConvergenceStudy> {
    if n_list.len() < 2 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("n_list must be increasing with >= 2 entries".into()));
    }
    let reference = spectral_propagate(oracle, psi0, plan_base.t_total, plan_base.time_mode)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let plan = plan_base.with_n_slices(n);
        let (out, _) = trotter_evolve(psi0, &plan)?;
        let diff: Vec<f64> = out
            .values()
            .iter()
            .zip(reference.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .collect();
        let err = quad_trapezoid(out.grid(), &diff).sqrt();
        rows.push(ConvergenceRow { n_slices: n, l2_error: err });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n_slices as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.l2_error.max(1e-300).ln()).collect();
    let (slope, _, _) = linear_fit(&xs, &ys);
    Ok(ConvergenceStudy { rows, fitted_order: -slope })
}
