//! Self-contained special-function kernels: modified Bessel `I_ν`/`K_ν`,
//! confluent hypergeometric `Φ`/`Ψ`, gamma/digamma, generalized Laguerre
//! polynomials, and the complementary error function of complex argument.

mod bessel;
mod erf;
mod gamma;
mod hyp;

pub use bessel::{bessel_i, bessel_ik, bessel_ik_scaled, bessel_k, wronskian_ki};
pub use erf::{erfc_complex, erfc_real, erfcx_complex, erfcx_real, faddeeva_upper};
pub use gamma::{digamma, gamma_complex, gamma_real};
pub use hyp::{kummer_m, laguerre, tricomi_u, SeriesControl, KUMMER_SERIES_RADIUS};
