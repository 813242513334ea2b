//! One-way quantum work-deficit.
//!
//! Globally, `N − S(ρ)` pure qubits can be extracted from `ρ` by unitaries and
//! dephasing. Locally, with one party allowed to dephase its qubit and send
//! the dephased qubit to the other, the receiver ends up holding the whole
//! dephased state while the sender holds nothing, so the local yield is
//! `N − min_b S(Σᵢ (I⊗Pᵢ) ρ (I⊗Pᵢ))`. The deficit is the difference:
//!
//! ```text
//! Δ(ρ) = min_b S(Σᵢ (I⊗Pᵢ) ρ (I⊗Pᵢ)) − S(ρ)
//! ```
//!
//! The dephased state is block diagonal in the measured basis,
//! `Σᵢ pᵢ ρ_{A|i} ⊗ |i⟩⟨i|`, so its entropy is `H(p) + Σᵢ pᵢ S(ρ_{A|i})`. The
//! optimizer uses that form; [`dephase`] builds the full matrix.

use serde::{Deserialize, Serialize};

use crate::discord::conditional_ensemble_on;
use crate::error::Result;
use crate::optimize::{BasisSearch, MeasurementBasis};
use crate::qstate::{shannon_entropy, Matrix2c, Matrix4c, Side, TwoQubitState};

const CLAMP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeficitResult {
    /// In qubits.
    pub deficit: f64,
    pub optimal_basis: MeasurementBasis,
    /// Entropy of the optimally dephased state, bits.
    pub dephased_entropy: f64,
    /// Entropy of the input state, bits.
    pub state_entropy: f64,
}

fn lift(p: &Matrix2c, side: Side) -> Matrix4c {
    let id = Matrix2c::identity();
    match side {
        Side::A => p.kronecker(&id),
        Side::B => id.kronecker(p),
    }
}

/// `Σᵢ Pᵢ ρ Pᵢ` with the projectors of `b` acting on `side`.
pub fn dephase(s: &TwoQubitState, b: &MeasurementBasis, side: Side) -> TwoQubitState {
    let rho = s.matrix();
    let out = b
        .projectors()
        .iter()
        .map(|p| {
            let lifted = lift(p, side);
            lifted * rho * lifted
        })
        .fold(Matrix4c::zeros(), |acc, m| acc + m);
    TwoQubitState::from_matrix(out)
}

/// Entropy of the dephased state via `H(p) + Σᵢ pᵢ S(ρ_{·|i})`.
pub fn dephased_entropy(s: &TwoQubitState, b: &MeasurementBasis, side: Side) -> f64 {
    let ens = conditional_ensemble_on(s, b, side);
    let probs = ens.probs.map(|p| p.max(0.0));
    shannon_entropy(&probs) + ens.average_entropy()
}

/// One-way deficit with dephasing on B.
pub fn one_way_deficit(s: &TwoQubitState) -> Result<DeficitResult> {
    one_way_deficit_with(s, Side::B, &BasisSearch::default())
}

pub fn one_way_deficit_with(
    s: &TwoQubitState,
    side: Side,
    search: &BasisSearch,
) -> Result<DeficitResult> {
    let state_entropy = s.entropy()?;
    let opt = search.minimize(|b| dephased_entropy(s, b, side))?;
    let mut deficit = opt.value - state_entropy;
    if (-CLAMP_TOLERANCE..0.0).contains(&deficit) {
        deficit = 0.0;
    }
    Ok(DeficitResult {
        deficit,
        optimal_basis: opt.basis,
        dephased_entropy: opt.value,
        state_entropy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::SingleQubitState;

    #[test]
    fn z_dephasing_of_classical_state_is_identity() {
        let cc = TwoQubitState::diagonal([0.5, 0.0, 0.0, 0.5]);
        let d = dephase(&cc, &MeasurementBasis::computational(), Side::B);
        assert!((d.matrix() - cc.matrix()).norm() < 1e-15);
    }

    #[test]
    fn z_dephasing_of_bell_state() {
        let d = dephase(
            &TwoQubitState::bell_phi_plus(),
            &MeasurementBasis::computational(),
            Side::B,
        );
        let expected = TwoQubitState::diagonal([0.5, 0.0, 0.0, 0.5]);
        assert!((d.matrix() - expected.matrix()).norm() < 1e-15);
    }

    #[test]
    fn dephasing_is_idempotent() {
        let s = TwoQubitState::werner(0.7);
        let b = MeasurementBasis::new(1.1, 0.4);
        for side in [Side::A, Side::B] {
            let once = dephase(&s, &b, side);
            let twice = dephase(&once, &b, side);
            assert!((once.matrix() - twice.matrix()).norm() < 1e-14);
        }
    }

    #[test]
    fn block_entropy_matches_full_matrix() {
        let s = TwoQubitState::werner(0.45);
        for (t, p) in [(0.0, 0.0), (0.8, 1.9), (2.5, 4.0)] {
            let b = MeasurementBasis::new(t, p);
            let direct = dephase(&s, &b, Side::B).entropy().unwrap();
            assert!((dephased_entropy(&s, &b, Side::B) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn reference_deficits() {
        let bell = one_way_deficit(&TwoQubitState::bell_phi_plus()).unwrap();
        assert!((bell.deficit - 1.0).abs() < 1e-9);
        assert!((bell.dephased_entropy - 1.0).abs() < 1e-9);
        let cc = one_way_deficit(&TwoQubitState::diagonal([0.5, 0.0, 0.0, 0.5])).unwrap();
        assert!(cc.deficit.abs() < 1e-9);
        let mixed = one_way_deficit(&TwoQubitState::maximally_mixed()).unwrap();
        assert!(mixed.deficit.abs() < 1e-9);
        let prod = TwoQubitState::product(
            &SingleQubitState::from_bloch(0.3, 0.1, 0.2),
            &SingleQubitState::diagonal(0.8),
        );
        assert!(one_way_deficit(&prod).unwrap().deficit.abs() < 1e-9);
    }
}
