//! Quantum mutual information, classical correlations and quantum discord.
//!
//! A projective measurement `{Pᵢ}` on one qubit leaves the other in
//! `ρ_{A|i} = tr_B[(I⊗Pᵢ) ρ (I⊗Pᵢ)] / pᵢ` with probability `pᵢ`. The
//! classical correlation is `J = S(ρ_A) − min Σᵢ pᵢ S(ρ_{A|i})` over
//! measurement bases and the discord is `Q = I − J`, where
//! `I = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
//!
//! Only rank-1 projective measurements are considered.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::optimize::{BasisSearch, MeasurementBasis};
use crate::qstate::{Matrix2c, Side, SingleQubitState, TwoQubitState};

/// Outcomes with probability below this are dropped.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-12;
const CLAMP_TOLERANCE: f64 = 1e-9;

/// Post-measurement states of the unmeasured qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalEnsemble {
    pub probs: [f64; 2],
    pub states: [SingleQubitState; 2],
}

impl ConditionalEnsemble {
    /// `Σᵢ pᵢ S(ρ_{·|i})` in bits.
    pub fn average_entropy(&self) -> f64 {
        self.probs
            .iter()
            .zip(&self.states)
            .filter(|(&p, _)| p >= MIN_BRANCH_PROBABILITY)
            .map(|(&p, s)| p * qubit_entropy(s))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    /// Minimized conditional entropy `S(ρ_{A|B})`.
    pub conditional_entropy: f64,
    pub optimal_basis: MeasurementBasis,
}

/// Entropy of a single-qubit state via its Bloch radius; tolerant of the tiny
/// negative eigenvalues that measurement of a slightly non-positive input can
/// produce.
pub(crate) fn qubit_entropy(s: &SingleQubitState) -> f64 {
    let m = s.matrix();
    let tr = m.trace().re;
    if tr <= 0.0 {
        return 0.0;
    }
    let z = (m[(0, 0)].re - m[(1, 1)].re) / tr;
    let off = 2.0 * m[(0, 1)].norm() / tr;
    let r = z.hypot(off).min(1.0);
    let p = 0.5 * (1.0 + r);
    let q = 0.5 * (1.0 - r);
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(q)
}

/// Measures `side` in basis `b`; the conditional states live on the other qubit.
pub fn conditional_ensemble_on(
    s: &TwoQubitState,
    b: &MeasurementBasis,
    side: Side,
) -> ConditionalEnsemble {
    let rho = s.matrix();
    let projectors = b.projectors();
    let mut probs = [0.0; 2];
    let mut states = [SingleQubitState::maximally_mixed(); 2];
    for (i, p) in projectors.iter().enumerate() {
        // tr_B[(I⊗P) ρ (I⊗P)] = tr_B[ρ (I⊗P)]
        let mut sigma = Matrix2c::zeros();
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    for l in 0..2 {
                        acc += match side {
                            Side::B => rho[(2 * r + k, 2 * c + l)] * p[(l, k)],
                            Side::A => rho[(2 * k + r, 2 * l + c)] * p[(l, k)],
                        };
                    }
                }
                sigma[(r, c)] = acc;
            }
        }
        let prob = sigma.trace().re;
        probs[i] = prob;
        if prob >= MIN_BRANCH_PROBABILITY {
            states[i] =
                SingleQubitState::from_matrix(sigma / num_complex::Complex64::new(prob, 0.0));
        }
    }
    ConditionalEnsemble { probs, states }
}

/// Conditional ensemble of A after measuring B.
pub fn conditional_ensemble(s: &TwoQubitState, b: &MeasurementBasis) -> ConditionalEnsemble {
    conditional_ensemble_on(s, b, Side::B)
}

/// `Σᵢ pᵢ S(ρ_{A|i})` for one basis on B, before minimization.
pub fn conditional_entropy(s: &TwoQubitState, b: &MeasurementBasis) -> f64 {
    conditional_ensemble(s, b).average_entropy()
}

pub fn conditional_entropy_on(s: &TwoQubitState, b: &MeasurementBasis, side: Side) -> f64 {
    conditional_ensemble_on(s, b, side).average_entropy()
}

/// `I(ρ) = S(ρ_A) + S(ρ_B) − S(ρ)` in bits.
pub fn mutual_information(s: &TwoQubitState) -> Result<f64> {
    let sa = s.reduced(Side::A).entropy()?;
    let sb = s.reduced(Side::B).entropy()?;
    Ok((sa + sb - s.entropy()?).max(0.0))
}

/// `J(ρ)` with the measurement on B, and the optimal basis.
pub fn classical_correlations(s: &TwoQubitState) -> Result<(f64, MeasurementBasis)> {
    classical_correlations_with(s, Side::B, &BasisSearch::default())
}

pub fn classical_correlations_with(
    s: &TwoQubitState,
    measured: Side,
    search: &BasisSearch,
) -> Result<(f64, MeasurementBasis)> {
    let unmeasured = s.reduced(measured.other()).entropy()?;
    let opt = search.minimize(|b| conditional_entropy_on(s, b, measured))?;
    Ok((unmeasured - opt.value, opt.basis))
}

/// Discord with the measurement on B.
pub fn discord(s: &TwoQubitState) -> Result<DiscordResult> {
    discord_with(s, Side::B, &BasisSearch::default())
}

pub fn discord_with(
    s: &TwoQubitState,
    measured: Side,
    search: &BasisSearch,
) -> Result<DiscordResult> {
    let mutual_info = mutual_information(s)?;
    let unmeasured = s.reduced(measured.other()).entropy()?;
    let opt = search.minimize(|b| conditional_entropy_on(s, b, measured))?;
    let classical_corr = unmeasured - opt.value;
    let mut q = mutual_info - classical_corr;
    if (-CLAMP_TOLERANCE..0.0).contains(&q) {
        q = 0.0;
    }
    Ok(DiscordResult {
        mutual_info,
        classical_corr,
        discord: q,
        conditional_entropy: opt.value,
        optimal_basis: opt.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::CorrelatorSet;
    use std::f64::consts::PI;

    fn bases() -> Vec<MeasurementBasis> {
        vec![
            MeasurementBasis::new(0.0, 0.0),
            MeasurementBasis::new(PI / 2.0, 0.0),
            MeasurementBasis::new(0.7, 2.1),
            MeasurementBasis::new(2.9, 5.0),
        ]
    }

    #[test]
    fn product_state_conditionals_equal_marginal() {
        let a = SingleQubitState::from_bloch(0.2, 0.3, -0.4);
        let b = SingleQubitState::from_bloch(0.5, -0.1, 0.6);
        let s = TwoQubitState::product(&a, &b);
        for basis in bases() {
            let ens = conditional_ensemble(&s, &basis);
            assert!((ens.probs[0] + ens.probs[1] - 1.0).abs() < 1e-12);
            for st in &ens.states {
                assert!((st.matrix() - a.matrix()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_z_measurement() {
        let ens = conditional_ensemble(
            &TwoQubitState::bell_phi_plus(),
            &MeasurementBasis::computational(),
        );
        assert!((ens.probs[0] - 0.5).abs() < 1e-15);
        assert!((ens.probs[1] - 0.5).abs() < 1e-15);
        assert!((ens.states[0].matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((ens.states[1].matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_steers_to_pure_states() {
        let bell = TwoQubitState::bell_phi_plus();
        for basis in bases() {
            let ens = conditional_ensemble(&bell, &basis);
            for st in &ens.states {
                assert!((st.eigenvalues()[0] - 1.0).abs() < 1e-12);
            }
            assert!(conditional_entropy(&bell, &basis).abs() < 1e-7);
        }
    }

    #[test]
    fn maximally_mixed_conditional_entropy_is_one() {
        for basis in bases() {
            let h = conditional_entropy(&TwoQubitState::maximally_mixed(), &basis);
            assert!((h - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_probability_branch_is_dropped() {
        let up = TwoQubitState::diagonal([1.0, 0.0, 0.0, 0.0]);
        let ens = conditional_ensemble(&up, &MeasurementBasis::computational());
        assert_eq!(ens.probs[1], 0.0);
        assert_eq!(ens.states[1], SingleQubitState::maximally_mixed());
        assert_eq!(ens.average_entropy(), 0.0);
    }

    #[test]
    fn mutual_information_references() {
        let a = SingleQubitState::from_bloch(0.0, 0.3, 0.4);
        let prod = TwoQubitState::product(&a, &a);
        assert!(mutual_information(&prod).unwrap().abs() < 1e-12);
        assert!((mutual_information(&TwoQubitState::bell_phi_plus()).unwrap() - 2.0).abs() < 1e-12);
        let cc = TwoQubitState::diagonal([0.5, 0.0, 0.0, 0.5]);
        assert!((mutual_information(&cc).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_discord_and_classical_correlations() {
        let bell = TwoQubitState::bell_phi_plus();
        let (j, _) = classical_correlations(&bell).unwrap();
        assert!((j - 1.0).abs() < 1e-9);
        let r = discord(&bell).unwrap();
        assert!((r.discord - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_state_discord_vanishes() {
        let a = SingleQubitState::from_bloch(0.6, 0.0, -0.3);
        let b = SingleQubitState::from_bloch(0.1, 0.2, 0.3);
        let r = discord(&TwoQubitState::product(&a, &b)).unwrap();
        assert!(r.discord.abs() < 1e-9);
        assert!(r.classical_corr.abs() < 1e-9);
    }

    #[test]
    fn phi_symmetries_for_real_correlators() {
        // txy = 0: reflection φ → −φ and the shift φ → φ + π leave the
        // conditional entropy unchanged
        let cs = CorrelatorSet::compose(0.2, -0.4, -0.1, 0.0);
        let s = TwoQubitState::from_correlators(&cs).unwrap();
        for theta in [0.3, 1.0, 2.2] {
            for phi in [0.2, 1.3, 2.9] {
                let h = conditional_entropy(&s, &MeasurementBasis::new(theta, phi));
                let reflected = conditional_entropy(&s, &MeasurementBasis::new(theta, -phi));
                let shifted = conditional_entropy(&s, &MeasurementBasis::new(theta, phi + PI));
                assert!((h - reflected).abs() < 1e-12);
                assert!((h - shifted).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_independence_for_isotropic_transverse_block() {
        // |txx| = |tyy| with txy = 0: the in-plane direction is irrelevant
        for (txx, tyy) in [(-0.4, -0.4), (0.3, -0.3)] {
            let cs = CorrelatorSet::compose(0.2, txx, tyy, 0.0);
            let s = TwoQubitState::from_correlators(&cs).unwrap();
            for theta in [0.3, 1.0, PI / 2.0, 2.2] {
                let reference = conditional_entropy(&s, &MeasurementBasis::new(theta, 0.0));
                for k in 1..64 {
                    let phi = k as f64 * std::f64::consts::TAU / 64.0;
                    let h = conditional_entropy(&s, &MeasurementBasis::new(theta, phi));
                    assert!((h - reference).abs() < 1e-10);
                }
            }
        }
    }
}
