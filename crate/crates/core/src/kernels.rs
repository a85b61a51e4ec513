//! Closed-form half-line kernels for the free Laplacian: imaginary-time
//! (heat) and real-time (Schrödinger) kernels under Dirichlet, Neumann, and
//! Robin (`ψ(0) = β ψ'(0)`, `β > 0`) boundary conditions.
//!
//! All kernels use diffusion constant 1; callers substitute the slice time
//! `ħ t / n` themselves. The Robin kernels are evaluated through the scaled
//! complementary error function so the `e^{t/β²}` growth cancels
//! analytically and the `β → 0` limit stays finite.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extensions::BoundaryCondition;
use crate::specfun::{erfcx_complex, erfcx_real};

/// Real vs imaginary time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeMode {
    Imaginary,
    Real,
}

/// One of the six analytic kernels, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub time_mode: TimeMode,
    pub bc: BoundaryCondition,
    /// Kernel time (already includes any ħ/n substitution).
    pub t: f64,
}

impl KernelSpec {
    pub fn new(time_mode: TimeMode, bc: BoundaryCondition, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("kernel time must be positive, got {t}")));
        }
        if let Some(beta) = bc.beta() {
            if beta < 0.0 {
                return Err(Error::Unsupported(
                    "Robin kernels with beta < 0 are not implemented (bound state)".into(),
                ));
            }
        }
        Ok(Self { time_mode, bc, t })
    }

    /// Evaluate the kernel; `β = 0` and `β = ∞` dispatch to the
    /// Dirichlet/Neumann branches.
    pub fn eval(&self, y: f64, z: f64) -> Result<Complex64> {
        match self.time_mode {
            TimeMode::Imaginary => {
                let v = match self.bc.beta() {
                    Some(b) if b == 0.0 => heat_dirichlet(self.t, y, z)?,
                    Some(b) if b.is_infinite() => heat_neumann(self.t, y, z)?,
                    Some(b) => heat_robin(b, self.t, y, z)?,
                    None => {
                        return Err(Error::Unsupported(
                            "kernel requires a Dirichlet/Neumann/Robin boundary condition".into(),
                        ))
                    }
                };
                Ok(Complex64::new(v, 0.0))
            }
            TimeMode::Real => match self.bc.beta() {
                Some(b) if b == 0.0 => schro_dirichlet(self.t, y, z),
                Some(b) if b.is_infinite() => schro_neumann(self.t, y, z),
                Some(b) => schro_robin(b, self.t, y, z),
                None => Err(Error::Unsupported(
                    "kernel requires a Dirichlet/Neumann/Robin boundary condition".into(),
                )),
            },
        }
    }
}

fn check_heat_args(t: f64, y: f64, z: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("kernel time must be positive, got {t}")));
    }
    if y < 0.0 || z < 0.0 {
        return Err(Error::Domain(format!("kernel arguments must be >= 0, got ({y}, {z})")));
    }
    Ok(())
}

/// Dirichlet heat kernel `(4πt)^{−1/2} [e^{−(y−z)²/4t} − e^{−(y+z)²/4t}]`.
///
/// The image subtraction removes exactly the weight of paths touching the
/// origin, so this is the transition density of the absorbed walk.
pub fn heat_dirichlet(t: f64, y: f64, z: f64) -> Result<f64> {
    check_heat_args(t, y, z)?;
    let pref = 1.0 / (4.0 * std::f64::consts::PI * t).sqrt();
    let dm = y - z;
    let dp = y + z;
    Ok(pref * ((-dm * dm / (4.0 * t)).exp() - (-dp * dp / (4.0 * t)).exp()))
}

/// Neumann heat kernel `(4πt)^{−1/2} [e^{−(y−z)²/4t} + e^{−(y+z)²/4t}]`.
///
/// The image sum weights paths reflecting off the origin; it conserves
/// probability: `∫₀^∞ p(t,y,z) dz = 1`.
pub fn heat_neumann(t: f64, y: f64, z: f64) -> Result<f64> {
    check_heat_args(t, y, z)?;
    let pref = 1.0 / (4.0 * std::f64::consts::PI * t).sqrt();
    let dm = y - z;
    let dp = y + z;
    Ok(pref * ((-dm * dm / (4.0 * t)).exp() + (-dp * dp / (4.0 * t)).exp()))
}

/// Robin heat kernel for `ψ(0) = β ψ'(0)`, `β > 0` finite:
///
/// ```text
/// p^{(β)} = p^N − β^{−1} e^{t/β² + (y+z)/β} erfc( √(t)/β + (y+z)/(2√t) ).
/// ```
///
/// Implemented as `p^N − β^{−1} e^{−(y+z)²/4t} erfcx(√t/β + (y+z)/(2√t))`,
/// which is the same expression with the exponentials cancelled
/// analytically; the naive form overflows for small `β`.
pub fn heat_robin(beta: f64, t: f64, y: f64, z: f64) -> Result<f64> {
    check_heat_args(t, y, z)?;
    if !(beta > 0.0) || beta.is_infinite() {
        return Err(Error::Unsupported(format!(
            "heat_robin needs finite beta > 0, got {beta} (beta <= 0 admits a bound state)"
        )));
    }
    let st = t.sqrt();
    let b = (y + z) / (2.0 * st);
    let arg = st / beta + b;
    let corr = (1.0 / beta) * (-b * b).exp() * erfcx_real(arg);
    Ok(heat_neumann(t, y, z)? - corr)
}

/// ∂/∂y of the Robin heat kernel (used for boundary-identity checks).
pub fn heat_robin_dy(beta: f64, t: f64, y: f64, z: f64) -> Result<f64> {
    check_heat_args(t, y, z)?;
    if !(beta > 0.0) || beta.is_infinite() {
        return Err(Error::Unsupported("heat_robin_dy needs finite beta > 0".into()));
    }
    let pref = 1.0 / (4.0 * std::f64::consts::PI * t).sqrt();
    let dm = y - z;
    let dp = y + z;
    let dp_n = pref
        * ((-dm * dm / (4.0 * t)).exp() * (-dm / (2.0 * t))
            + (-dp * dp / (4.0 * t)).exp() * (-dp / (2.0 * t)));
    let st = t.sqrt();
    let b = (y + z) / (2.0 * st);
    let arg = st / beta + b;
    // d/dy of β^{−1} e^{−b²} erfcx(arg); erfcx'(x) = 2x erfcx(x) − 2/√π.
    let erfcx_v = erfcx_real(arg);
    let derfcx = 2.0 * arg * erfcx_v - 2.0 / std::f64::consts::PI.sqrt();
    let dcorr = (1.0 / beta)
        * (-b * b).exp()
        * (-2.0 * b * erfcx_v + derfcx)
        * (1.0 / (2.0 * st));
    Ok(dp_n - dcorr)
}

/// Principal square root of `4πit`.
fn sqrt_4pi_it(t: f64) -> Complex64 {
    Complex64::new(0.0, 4.0 * std::f64::consts::PI * t).sqrt()
}

/// Real-time Dirichlet kernel `(4πit)^{−1/2}[e^{i(y−z)²/4t} − e^{i(y+z)²/4t}]`.
pub fn schro_dirichlet(t: f64, y: f64, z: f64) -> Result<Complex64> {
    check_heat_args(t, y, z)?;
    let dm = y - z;
    let dp = y + z;
    let em = Complex64::new(0.0, dm * dm / (4.0 * t)).exp();
    let ep = Complex64::new(0.0, dp * dp / (4.0 * t)).exp();
    Ok((em - ep) / sqrt_4pi_it(t))
}

/// Real-time Neumann kernel (image sum).
pub fn schro_neumann(t: f64, y: f64, z: f64) -> Result<Complex64> {
    check_heat_args(t, y, z)?;
    let dm = y - z;
    let dp = y + z;
    let em = Complex64::new(0.0, dm * dm / (4.0 * t)).exp();
    let ep = Complex64::new(0.0, dp * dp / (4.0 * t)).exp();
    Ok((em + ep) / sqrt_4pi_it(t))
}

/// Real-time Robin kernel,
///
/// ```text
/// g^{(β)} = g^N − β^{−1} e^{it/β² + (y+z)/β} erfc[ (it/β²)^{1/2} + (y+z)/(2β) (it/β²)^{−1/2} ],
/// ```
///
/// with principal square roots, evaluated through `erfcx` so the complex
/// exponential cancels: `g^N − β^{−1} e^{i(y+z)²/4t} erfcx(c + d)` with
/// `c = √(it)/β`, `d = (y+z)/(2√(it))`.
pub fn schro_robin(beta: f64, t: f64, y: f64, z: f64) -> Result<Complex64> {
    check_heat_args(t, y, z)?;
    if !(beta > 0.0) || beta.is_infinite() {
        return Err(Error::Unsupported(format!(
            "schro_robin needs finite beta > 0, got {beta}"
        )));
    }
    let sqrt_it = Complex64::new(0.0, t).sqrt(); // √t e^{iπ/4}
    let c = sqrt_it / beta;
    let d = (y + z) / (2.0 * sqrt_it);
    let phase = Complex64::new(0.0, (y + z) * (y + z) / (4.0 * t)).exp(); // e^{−d²}
    let corr = phase * erfcx_complex(c + d) / beta;
    Ok(schro_neumann(t, y, z)? - corr)
}
