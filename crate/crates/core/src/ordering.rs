//! Factor-ordering parameter algebra and regime classification.
//!
//! An ordering of the quantized half-line Hamiltonian is a triple
//! `(j1, j2, j3)` with `j1 + j2 + j3 = 1`. Physics depends on the triple only
//! through `J+ = j3 + j1`, which sets the strength `q = J+² − 1/4` of the
//! inverse-square quantum potential in the flat representation
//!
//! ```text
//! H = −ħ² d²/dy² + ħ² q / y² + (Λ/4) y²   on L²(ℝ⁺, dy).
//! ```
//!
//! `J− = j3 − j1` only moves the Hamiltonian within a similarity class.

use crate::error::{Error, Result};

/// Tolerance for the `j1 + j2 + j3 = 1` constraint and for the regime
/// boundary comparisons. Inputs are exact rationals in practice.
pub const ORDERING_TOL: f64 = 1e-12;

/// Model constants: ħ and the cosmological constant Λ (both positive,
/// dimensionless in code).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub lambda: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, lambda: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self { hbar, lambda })
    }
}

/// Self-adjointness regime of an ordering, decided by `|J+|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `|J+| ≥ 1`: the Hamiltonian is essentially self-adjoint; no boundary
    /// condition is needed and the Dirichlet kernel drives propagation.
    EssentiallySelfAdjoint,
    /// `1/2 < |J+| < 1`: a repulsive barrier with a one-parameter family of
    /// extensions; only the Dirichlet extension supports time slicing.
    BarrierMultiExt,
    /// `|J+| = 1/2`: the quantum potential vanishes; every boundary
    /// condition (Dirichlet, Neumann, Robin) supports time slicing.
    CriticalNoPotential,
    /// `|J+| < 1/2`: attractive well. Extensions are classified but the
    /// product formulas do not apply; propagation is refused.
    WellUnsupported,
}

/// An ordering triple with its derived quantities and regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingInfo {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    /// `J+ = j3 + j1`, the physically meaningful combination.
    pub j_plus: f64,
    /// `J− = j3 − j1`, the similarity (weight) exponent direction.
    pub j_minus: f64,
    /// Quantum-potential coefficient `q = J+² − 1/4 ≥ −1/4`.
    pub q: f64,
    /// Bessel order `ν = |J+| / 2` of the reference modes.
    pub nu: f64,
    /// Weight exponent `m = 1/4 + J−/2` of the curved → flat map.
    pub m: f64,
    /// Leading asymptotic exponent `β = 1/4 + |J+|/2` (solutions behave as
    /// `y^{2β}` near the origin). Distinct from the Robin parameter.
    pub beta_exp: f64,
    pub regime: Regime,
}

impl OrderingInfo {
    /// `|J+|`.
    pub fn abs_j_plus(&self) -> f64 {
        self.j_plus.abs()
    }

    /// Whether time-sliced propagation applies (`|J+| ≥ 1/2`, where the
    /// effective potential is nonnegative).
    pub fn supports_propagation(&self) -> bool {
        self.regime != Regime::WellUnsupported
    }
}

/// Classify an ordering triple, computing all derived quantities.
pub fn classify(j1: f64, j2: f64, j3: f64) -> Result<OrderingInfo> {
    let sum = j1 + j2 + j3;
    if (sum - 1.0).abs() > ORDERING_TOL {
        return Err(Error::ConstraintViolation { sum, tol: ORDERING_TOL });
    }
    let j_plus = j3 + j1;
    let j_minus = j3 - j1;
    let a = j_plus.abs();
    let q = j_plus * j_plus - 0.25;
    let regime = if a >= 1.0 - ORDERING_TOL {
        Regime::EssentiallySelfAdjoint
    } else if (a - 0.5).abs() <= ORDERING_TOL {
        Regime::CriticalNoPotential
    } else if a > 0.5 {
        Regime::BarrierMultiExt
    } else {
        Regime::WellUnsupported
    };
    Ok(OrderingInfo {
        j1,
        j2,
        j3,
        j_plus,
        j_minus,
        q,
        nu: 0.5 * a,
        m: 0.25 + 0.5 * j_minus,
        beta_exp: 0.25 + 0.5 * a,
        regime,
    })
}

/// Effective potential `V(y) = ħ² q / y² + Λ y² / 4` in the flat
/// representation. Nonnegative for all `y` iff `q ≥ 0` (`|J+| ≥ 1/2`).
pub fn effective_potential(
    ordering: &OrderingInfo,
    constants: &PhysicalConstants,
    y: f64,
) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("effective_potential needs y > 0, got {y}")));
    }
    let h2 = constants.hbar * constants.hbar;
    Ok(h2 * ordering.q / (y * y) + 0.25 * constants.lambda * y * y)
}

/// Exponent `α = (J−ᵃ − J−ᵇ)/2` such that `H_b = l^{−α} H_a l^{α}` for two
/// orderings sharing the same `J+`.
pub fn similarity_exponent(a: &OrderingInfo, b: &OrderingInfo) -> Result<f64> {
    if (a.j_plus - b.j_plus).abs() > ORDERING_TOL {
        return Err(Error::IncompatibleOrderings { a: a.j_plus, b: b.j_plus });
    }
    Ok(0.5 * (a.j_minus - b.j_minus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplace_beltrami_ordering_is_critical() {
        let o = classify(0.5, 0.5, 0.0).unwrap();
        assert_eq!(o.j_plus, 0.5);
        assert_eq!(o.j_minus, -0.5);
        assert_eq!(o.q, 0.0);
        assert_eq!(o.regime, Regime::CriticalNoPotential);
    }

    #[test]
    fn steep_barrier_is_essentially_self_adjoint() {
        let o = classify(1.0, -1.0, 1.0).unwrap();
        assert_eq!(o.j_plus, 2.0);
        assert_eq!(o.j_minus, 0.0);
        assert_eq!(o.q, 3.75);
        assert_eq!(o.regime, Regime::EssentiallySelfAdjoint);
    }

    #[test]
    fn pure_momentum_ordering_is_a_well() {
        let o = classify(0.0, 1.0, 0.0).unwrap();
        assert_eq!(o.j_plus, 0.0);
        assert_eq!(o.q, -0.25);
        assert_eq!(o.regime, Regime::WellUnsupported);
    }

    #[test]
    fn regime_boundaries_are_closed() {
        // |J+| = 1 is already unique-extension territory.
        let o = classify(0.5, 0.0, 0.5).unwrap();
        assert_eq!(o.regime, Regime::EssentiallySelfAdjoint);
        // Just inside the barrier band.
        let o = classify(0.45, 0.1, 0.45).unwrap();
        assert_eq!(o.regime, Regime::BarrierMultiExt);
    }

    #[test]
    fn constraint_violation_is_rejected() {
        assert!(matches!(
            classify(0.5, 0.5, 0.5),
            Err(Error::ConstraintViolation { .. })
        ));
    }

    #[test]
    fn potential_values() {
        let c = PhysicalConstants::new(1.0, 4.0).unwrap();
        // |J+| = 1/2: quantum potential absent, V = Λ y² / 4 exactly.
        let o = classify(0.5, 0.5, 0.0).unwrap();
        for &y in &[0.1, 0.7, 3.0] {
            let v = effective_potential(&o, &c, y).unwrap();
            assert!((v - y * y).abs() < 1e-14);
        }
        // |J+| = 1: q = 3/4, V(1) = 3/4 + 1 = 7/4.
        let o = classify(0.5, 0.0, 0.5).unwrap();
        assert!((effective_potential(&o, &c, 1.0).unwrap() - 1.75).abs() < 1e-14);
        // |J+| = 0: q = −1/4, V(1) = 3/4 and V(0.1) < 0.
        let o = classify(0.0, 1.0, 0.0).unwrap();
        assert!((effective_potential(&o, &c, 1.0).unwrap() - 0.75).abs() < 1e-14);
        assert!(effective_potential(&o, &c, 0.1).unwrap() < 0.0);
        assert!(effective_potential(&o, &c, 0.0).is_err());
    }

    #[test]
    fn similarity_exponent_cases() {
        let a = classify(0.5, 0.5, 0.0).unwrap();
        let b = classify(0.0, 0.5, 0.5).unwrap();
        assert!((similarity_exponent(&a, &b).unwrap() + 0.5).abs() < 1e-14);
        assert_eq!(similarity_exponent(&a, &a).unwrap(), 0.0);
        let c = classify(1.0, -1.0, 1.0).unwrap();
        let d = classify(2.0, -3.0, 2.0).unwrap();
        assert!(matches!(
            similarity_exponent(&c, &d),
            Err(Error::IncompatibleOrderings { .. })
        ));
    }
}
