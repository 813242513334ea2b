//! Negativity and logarithmic negativity.
//!
//! For two qubits a negative eigenvalue of the partial transpose is both
//! necessary and sufficient for entanglement, and there is at most one.

use serde::{Deserialize, Serialize};

use crate::qstate::{PartialTranspose, Side, TwoQubitState};

/// Partial-transpose eigenvalues above `-ZERO_THRESHOLD` count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementResult {
    pub negativity: f64,
    /// In ebits.
    pub log_negativity: f64,
}

fn negativity_of(pt: &PartialTranspose) -> f64 {
    // (‖ρ^T‖₁ − 1)/2 equals the magnitude of the negative part for unit trace
    pt.eigenvalues()
        .iter()
        .filter(|&&l| l < -ZERO_THRESHOLD)
        .map(|l| -l)
        .sum()
}

/// Smallest eigenvalue of the partial transpose over A.
pub fn min_pt_eigenvalue(s: &TwoQubitState) -> f64 {
    s.partial_transpose(Side::A).min_eigenvalue()
}

/// `N(ρ) = (‖ρ^{T_A}‖₁ − 1)/2`, exactly zero for PPT states.
pub fn negativity(s: &TwoQubitState) -> f64 {
    negativity_of(&s.partial_transpose(Side::A))
}

/// Negativity with the transpose taken over `side`.
pub fn negativity_on(s: &TwoQubitState, side: Side) -> f64 {
    negativity_of(&s.partial_transpose(side))
}

/// `E_N(ρ) = log₂(2N + 1)` in ebits.
pub fn log_negativity(s: &TwoQubitState) -> f64 {
    log_negativity_from(negativity(s))
}

pub fn log_negativity_from(negativity: f64) -> f64 {
    if negativity == 0.0 {
        0.0
    } else {
        (2.0 * negativity + 1.0).log2()
    }
}

pub fn entanglement(s: &TwoQubitState) -> EntanglementResult {
    let negativity = negativity(s);
    EntanglementResult {
        negativity,
        log_negativity: log_negativity_from(negativity),
    }
}
