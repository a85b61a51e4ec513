//! Python bindings for the half-line toolkit: ordering classification,
//! boundary kernels, spectra, time-sliced evolution, and path-measure
//! Monte Carlo.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use halfline::evolve::{trotter_evolve, GridSpec, KineticMethod, TrotterPlan};
use halfline::extensions::{beta_from_theta as core_beta_from_theta, deficiency_indices,
                           fit_theta as core_fit_theta, make_reference_modes,
                           theta_from_beta as core_theta_from_beta, BcKind, BoundaryCondition};
use halfline::kernels::TimeMode;
use halfline::mcpaths::{estimate_propagator, McBoundary, McConfig, ZBins};
use halfline::spectral::{dirichlet_eigenbasis, fd_eigensolve};
use halfline::wavefunction::{Representation, WaveFunction};
use halfline::{classify, effective_potential as core_effective_potential, Regime};

fn err(e: halfline::Error) -> PyErr {
    match e {
        halfline::Error::NoConvergence { .. } | halfline::Error::Numerical(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A factor ordering `(j1, j2, j3)` with its derived quantities.
#[pyclass(name = "Ordering", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOrdering {
    inner: halfline::OrderingInfo,
}

#[pymethods]
impl PyOrdering {
    #[new]
    fn new(j1: f64, j2: f64, j3: f64) -> PyResult<Self> {
        Ok(Self { inner: classify(j1, j2, j3).map_err(err)? })
    }

    #[getter]
    fn j_plus(&self) -> f64 {
        self.inner.j_plus
    }

    #[getter]
    fn j_minus(&self) -> f64 {
        self.inner.j_minus
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu
    }

    #[getter]
    fn m(&self) -> f64 {
        self.inner.m
    }

    #[getter]
    fn beta_exp(&self) -> f64 {
        self.inner.beta_exp
    }

    #[getter]
    fn regime(&self) -> &'static str {
        match self.inner.regime {
            Regime::EssentiallySelfAdjoint => "essentially-self-adjoint",
            Regime::BarrierMultiExt => "barrier-multi-extension",
            Regime::CriticalNoPotential => "critical-no-potential",
            Regime::WellUnsupported => "well-unsupported",
        }
    }

    /// Deficiency indices `(n_plus, n_minus)`.
    fn deficiency_indices(&self) -> (usize, usize) {
        deficiency_indices(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Ordering(j1={}, j2={}, j3={}, J+={}, regime='{}')",
            self.inner.j1,
            self.inner.j2,
            self.inner.j3,
            self.inner.j_plus,
            self.regime()
        )
    }
}

/// Model constants ħ and Λ.
#[pyclass(name = "Constants", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConstants {
    inner: halfline::PhysicalConstants,
}

#[pymethods]
impl PyConstants {
    #[new]
    #[pyo3(signature = (hbar=1.0, lam=4.0))]
    fn new(hbar: f64, lam: f64) -> PyResult<Self> {
        Ok(Self { inner: halfline::PhysicalConstants::new(hbar, lam).map_err(err)? })
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.inner.lambda
    }
}

/// Effective potential `V(y) = ħ² q / y² + Λ y² / 4`.
#[pyfunction]
fn effective_potential(ordering: &PyOrdering, constants: &PyConstants, y: f64) -> PyResult<f64> {
    core_effective_potential(&ordering.inner, &constants.inner, y).map_err(err)
}

#[pyfunction]
fn heat_dirichlet(t: f64, y: f64, z: f64) -> PyResult<f64> {
    halfline::kernels::heat_dirichlet(t, y, z).map_err(err)
}

#[pyfunction]
fn heat_neumann(t: f64, y: f64, z: f64) -> PyResult<f64> {
    halfline::kernels::heat_neumann(t, y, z).map_err(err)
}

#[pyfunction]
fn heat_robin(beta: f64, t: f64, y: f64, z: f64) -> PyResult<f64> {
    halfline::kernels::heat_robin(beta, t, y, z).map_err(err)
}

#[pyfunction]
fn schro_dirichlet(t: f64, y: f64, z: f64) -> PyResult<Complex64> {
    halfline::kernels::schro_dirichlet(t, y, z).map_err(err)
}

#[pyfunction]
fn schro_neumann(t: f64, y: f64, z: f64) -> PyResult<Complex64> {
    halfline::kernels::schro_neumann(t, y, z).map_err(err)
}

#[pyfunction]
fn schro_robin(beta: f64, t: f64, y: f64, z: f64) -> PyResult<Complex64> {
    halfline::kernels::schro_robin(beta, t, y, z).map_err(err)
}

#[pyfunction]
fn bessel_i(nu: f64, x: f64) -> PyResult<f64> {
    halfline::specfun::bessel_i(nu, x).map_err(err)
}

#[pyfunction]
fn bessel_k(nu: f64, x: f64) -> PyResult<f64> {
    halfline::specfun::bessel_k(nu, x).map_err(err)
}

#[pyfunction]
fn erfc(z: Complex64) -> Complex64 {
    halfline::specfun::erfc_complex(z)
}

#[pyfunction]
fn gamma(z: Complex64) -> PyResult<Complex64> {
    halfline::specfun::gamma_complex(z).map_err(err)
}

/// Reference-mode coefficients `(C1, C2, k_log)`; entries are None where
/// the coefficient is undefined for the ordering.
#[pyfunction]
fn reference_coefficients(
    ordering: &PyOrdering,
    constants: &PyConstants,
) -> (Option<f64>, f64, Option<f64>) {
    let m = make_reference_modes(&ordering.inner, &constants.inner);
    (m.c1, m.c2, m.k)
}

#[pyfunction]
fn beta_from_theta(ordering: &PyOrdering, constants: &PyConstants, theta: f64) -> PyResult<f64> {
    let m = make_reference_modes(&ordering.inner, &constants.inner);
    core_beta_from_theta(&m, theta).map_err(err)
}

#[pyfunction]
fn theta_from_beta(ordering: &PyOrdering, constants: &PyConstants, beta: f64) -> PyResult<f64> {
    let m = make_reference_modes(&ordering.inner, &constants.inner);
    core_theta_from_beta(&m, beta).map_err(err)
}

/// Exact Dirichlet-extension energies `E_n = ħ√Λ (2n + 1 + |J+|)`.
#[pyfunction]
fn dirichlet_energies(ordering: &PyOrdering, constants: &PyConstants, n_max: usize) -> Vec<f64> {
    halfline::spectral::dirichlet_energies(&ordering.inner, &constants.inner, n_max)
}

/// Finite-difference spectrum under a boundary selector
/// (`theta=X`, `l=X`, `beta=X`, `dirichlet`, `neumann`).
#[pyfunction]
#[pyo3(signature = (ordering, constants, bc, n_max=6, y_max=12.0, n_points=4000))]
fn fd_spectrum(
    ordering: &PyOrdering,
    constants: &PyConstants,
    bc: &str,
    n_max: usize,
    y_max: f64,
    n_points: usize,
) -> PyResult<Vec<f64>> {
    let bc = BoundaryCondition::parse(bc).map_err(err)?;
    let basis = fd_eigensolve(&ordering.inner, &constants.inner, &bc, y_max, n_points, n_max)
        .map_err(err)?;
    Ok(basis.energies)
}

/// Uniform propagation grid `h, 2h, …, y_max`.
#[pyfunction]
fn make_grid(y_max: f64, n_points: usize) -> PyResult<Vec<f64>> {
    Ok(GridSpec::new(y_max, n_points).map_err(err)?.build())
}

/// Exact Dirichlet eigenmode `k` sampled on the propagation grid.
#[pyfunction]
fn eigenmode(
    ordering: &PyOrdering,
    constants: &PyConstants,
    k: usize,
    y_max: f64,
    n_points: usize,
) -> PyResult<Vec<Complex64>> {
    let grid = GridSpec::new(y_max, n_points).map_err(err)?.build();
    let basis =
        dirichlet_eigenbasis(&ordering.inner, &constants.inner, k + 1, &grid).map_err(err)?;
    Ok(basis.modes[k].values().to_vec())
}

fn parse_time_mode(s: &str) -> PyResult<TimeMode> {
    match s {
        "imag" | "imaginary" => Ok(TimeMode::Imaginary),
        "real" => Ok(TimeMode::Real),
        other => {
            Err(PyValueError::new_err(format!("time_mode must be imag or real, got {other}")))
        }
    }
}

fn parse_kinetic(kinetic: &str, kind: BcKind) -> PyResult<KineticMethod> {
    Ok(match kinetic {
        "auto" => match kind {
            BcKind::Dirichlet => KineticMethod::SineTransform,
            BcKind::Neumann => KineticMethod::CosineTransform,
            BcKind::Robin => KineticMethod::RobinEigenQuadrature,
            BcKind::General => KineticMethod::KernelMatrix,
        },
        "sine" => KineticMethod::SineTransform,
        "cosine" => KineticMethod::CosineTransform,
        "kernel" => KineticMethod::KernelMatrix,
        "robin-quad" => KineticMethod::RobinEigenQuadrature,
        other => return Err(PyValueError::new_err(format!("unknown kinetic method {other}"))),
    })
}

/// Run the time-sliced product; returns `(grid, final_values, norms)`.
#[pyfunction]
#[pyo3(signature = (ordering, constants, bc, psi0, t, n_slices, time_mode="imag",
                    y_max=12.0, n_points=1024, kinetic="auto"))]
#[allow(clippy::too_many_arguments)]
fn evolve(
    ordering: &PyOrdering,
    constants: &PyConstants,
    bc: &str,
    psi0: Vec<Complex64>,
    t: f64,
    n_slices: usize,
    time_mode: &str,
    y_max: f64,
    n_points: usize,
    kinetic: &str,
) -> PyResult<(Vec<f64>, Vec<Complex64>, Vec<f64>)> {
    let bc = BoundaryCondition::parse(bc).map_err(err)?;
    let grid = GridSpec::new(y_max, n_points).map_err(err)?;
    let mode = parse_time_mode(time_mode)?;
    let method = parse_kinetic(kinetic, bc.kind())?;
    let plan =
        TrotterPlan::new(ordering.inner, constants.inner, bc, grid, t, n_slices, mode, method)
            .map_err(err)?;
    let g = grid.build();
    if psi0.len() != g.len() {
        return Err(PyValueError::new_err(format!(
            "psi0 has {} samples but the grid has {}",
            psi0.len(),
            g.len()
        )));
    }
    let wf = WaveFunction::new(g.clone(), psi0, Representation::FlatY).map_err(err)?;
    let (out, diag) = trotter_evolve(&wf, &plan).map_err(err)?;
    Ok((g, out.values().to_vec(), diag.norms))
}

/// Fit the extension angle from samples near the origin.
#[pyfunction]
#[pyo3(signature = (ordering, constants, grid, values, window=(1e-3, 1e-2)))]
fn fit_theta(
    ordering: &PyOrdering,
    constants: &PyConstants,
    grid: Vec<f64>,
    values: Vec<Complex64>,
    window: (f64, f64),
) -> PyResult<f64> {
    let m = make_reference_modes(&ordering.inner, &constants.inner);
    let wf = WaveFunction::new(grid, values, Representation::FlatY).map_err(err)?;
    core_fit_theta(&m, &wf, window).map_err(err)
}

/// Monte Carlo endpoint histogram under the avoiding (`"dirichlet"`) or
/// reflecting (`"neumann"`) measure. Returns rows
/// `(z_center, value, std_error, n_effective)`.
#[pyfunction]
#[pyo3(signature = (ordering, constants, bc, t, n_slices, n_samples, seed, y0,
                    lo=0.0, hi=4.0, n_bins=20))]
#[allow(clippy::too_many_arguments)]
fn mc_propagator(
    ordering: &PyOrdering,
    constants: &PyConstants,
    bc: &str,
    t: f64,
    n_slices: usize,
    n_samples: usize,
    seed: u64,
    y0: f64,
    lo: f64,
    hi: f64,
    n_bins: usize,
) -> PyResult<Vec<(f64, f64, f64, usize)>> {
    let bc = match bc {
        "dirichlet" => McBoundary::Dirichlet,
        "neumann" => McBoundary::Neumann,
        other => {
            return Err(PyValueError::new_err(format!(
                "mc boundary must be dirichlet or neumann, got {other}"
            )))
        }
    };
    let cfg =
        McConfig::new(ordering.inner, constants.inner, bc, t, n_slices, n_samples, seed, y0)
            .map_err(err)?;
    let bins = ZBins::new(lo, hi, n_bins).map_err(err)?;
    let est = estimate_propagator(&cfg, &bins).map_err(err)?;
    Ok(bins
        .centers()
        .into_iter()
        .zip(est)
        .map(|(z, e)| (z, e.value, e.std_error, e.n_effective))
        .collect())
}

#[pymodule]
fn halfline_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrdering>()?;
    m.add_class::<PyConstants>()?;
    m.add_function(wrap_pyfunction!(effective_potential, m)?)?;
    m.add_function(wrap_pyfunction!(heat_dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(heat_neumann, m)?)?;
    m.add_function(wrap_pyfunction!(heat_robin, m)?)?;
    m.add_function(wrap_pyfunction!(schro_dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(schro_neumann, m)?)?;
    m.add_function(wrap_pyfunction!(schro_robin, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_i, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_k, m)?)?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(reference_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(beta_from_theta, m)?)?;
    m.add_function(wrap_pyfunction!(theta_from_beta, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_energies, m)?)?;
    m.add_function(wrap_pyfunction!(fd_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(make_grid, m)?)?;
    m.add_function(wrap_pyfunction!(eigenmode, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(fit_theta, m)?)?;
    m.add_function(wrap_pyfunction!(mc_propagator, m)?)?;
    Ok(())
}
