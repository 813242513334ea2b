//! Two-point functions of the quenched XY chain.
//!
//! With `Λ(x) = √(γ² sin²φ + (x − cos φ)²)` the transverse magnetization and
//! the nearest-neighbour correlators of the state that started in the ground
//! state at field `ã` and evolved for `t̃` at zero field are
//!
//! ```text
//! G(R,t̃) = (γ/π) ∫ sin(Rφ) sin φ [γ² sin²φ + (cos φ − ã) cos φ + ã cos φ cos(2Λ(0)t̃)] / (Λ(ã)Λ²(0))
//!        − (1/π) ∫ cos φ ([γ² sin²φ + (cos φ − ã) cos φ] cos φ − ã γ² sin²φ cos(2Λ(0)t̃)) / (Λ(ã)Λ²(0))
//! S(t̃)   = −(γã/π) ∫ sin²φ sin(2Λ(0)t̃) / (Λ(ã)Λ(0))
//! Mᶻ(t̃)  = (1/π) ∫ (ã γ² sin²φ cos(2Λ(0)t̃) − cos φ [(cos φ − ã) cos φ + γ² sin²φ]) / (Λ(ã)Λ²(0))
//! ```
//!
//! all integrals over `φ ∈ [0, π]`. Then `Tˣˣ = G(−1)`, `Tʸʸ = G(+1)`,
//! `Tˣʸ = Tʸˣ = S` and `Tᶻᶻ = (Mᶻ)² − G(1)G(−1) + S²`.
//!
//! Every time-dependent term carries a factor `ã`, so at `ã = 0` nothing
//! evolves. At `t̃ = 0` the expressions collapse to the familiar ground-state
//! forms, e.g. `Mᶻ = (1/π) ∫ (ã − cos φ)/Λ(ã)`.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive, QuadratureSpec};

/// Dimensionless quench parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Anisotropy, in `(0, 1]`.
    pub gamma: f64,
    /// Initial transverse field `a/J`.
    pub a_tilde: f64,
    /// Evolution time `Jt/ħ`.
    pub t_tilde: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, a_tilde: f64, t_tilde: f64) -> Result<Self> {
        let p = ModelParams {
            gamma,
            a_tilde,
            t_tilde,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        if !self.a_tilde.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a_tilde must be finite, got {}",
                self.a_tilde
            )));
        }
        if !(self.t_tilde >= 0.0 && self.t_tilde.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_tilde must be finite and non-negative, got {}",
                self.t_tilde
            )));
        }
        Ok(())
    }

    pub fn with_a(self, a_tilde: f64) -> Self {
        ModelParams { a_tilde, ..self }
    }

    pub fn with_t(self, t_tilde: f64) -> Self {
        ModelParams { t_tilde, ..self }
    }
}

/// The five numbers that fix the two-site state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelatorSet {
    pub mz: f64,
    pub txx: f64,
    pub tyy: f64,
    pub tzz: f64,
    pub txy: f64,
}

impl CorrelatorSet {
    /// Composes `Tᶻᶻ` from the independent correlators.
    pub fn compose(mz: f64, txx: f64, tyy: f64, txy: f64) -> Self {
        CorrelatorSet {
            mz,
            txx,
            tyy,
            tzz: mz * mz - txx * tyy + txy * txy,
            txy,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.mz, self.txx, self.tyy, self.tzz, self.txy]
    }

    pub fn max_abs_diff(&self, other: &CorrelatorSet) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Bond direction `R` in `G(R, t̃)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lag {
    Minus,
    Plus,
}

impl Lag {
    pub fn value(self) -> f64 {
        match self {
            Lag::Minus => -1.0,
            Lag::Plus => 1.0,
        }
    }
}

impl TryFrom<i32> for Lag {
    type Error = Error;

    fn try_from(r: i32) -> Result<Self> {
        match r {
            -1 => Ok(Lag::Minus),
            1 => Ok(Lag::Plus),
            _ => Err(Error::InvalidParameter(format!("R must be ±1, got {r}"))),
        }
    }
}

/// `Λ(x) = √(γ² sin²φ + (x − cos φ)²)`.
#[inline]
pub fn dispersion(x: f64, phi: f64, gamma: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    (gamma * gamma * s * s + (x - c) * (x - c)).sqrt()
}

/// Integrands of `[G(+1), G(−1), S, Mᶻ]` at momentum `phi`.
///
/// All four share `Λ(ã)`, `Λ(0)` and the oscillating factors.
#[inline]
fn integrands(p: &ModelParams, phi: f64) -> [f64; 4] {
    let g = p.gamma;
    let a = p.a_tilde;
    let (s, c) = phi.sin_cos();
    let g2s2 = g * g * s * s;
    let lam_a = (g2s2 + (a - c) * (a - c)).sqrt();
    let lam0_sq = g2s2 + c * c;
    let lam0 = lam0_sq.sqrt();
    let (st, ct) = (2.0 * lam0 * p.t_tilde).sin_cos();
    let denom = lam_a * lam0_sq;
    let bracket = g2s2 + (c - a) * c;

    let second = FRAC_1_PI * c * (bracket * c - a * g2s2 * ct) / denom;
    let first = |r: f64| g * FRAC_1_PI * (phi * r).sin() * s * (bracket + a * c * ct) / denom;

    let g_plus = first(1.0) - second;
    let g_minus = first(-1.0) - second;
    let s_t = -g * a * FRAC_1_PI * s * s * st / (lam_a * lam0);
    let m_z = FRAC_1_PI * (ct * g2s2 * a - c * bracket) / denom;
    [g_plus, g_minus, s_t, m_z]
}

fn integrate_all(p: &ModelParams, spec: &QuadratureSpec) -> Result<[f64; 4]> {
    p.validate()?;
    integrate_adaptive(|phi| integrands(p, phi), 0.0, PI, spec).map(|e| e.value)
}

/// `G(R, t̃)`. `Tˣˣ = G(−1)` and `Tʸʸ = G(+1)`.
pub fn correlator_g(r: Lag, p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    let idx = match r {
        Lag::Plus => 0,
        Lag::Minus => 1,
    };
    integrate_adaptive(|phi| [integrands(p, phi)[idx]], 0.0, PI, spec).map(|e| e.value[0])
}

/// `S(t̃) = Tˣʸ = Tʸˣ`.
pub fn correlator_s(p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    integrate_adaptive(|phi| [integrands(p, phi)[2]], 0.0, PI, spec).map(|e| e.value[0])
}

/// Transverse magnetization `Mᶻ(t̃)`.
pub fn magnetization_z(p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    integrate_adaptive(|phi| [integrands(p, phi)[3]], 0.0, PI, spec).map(|e| e.value[0])
}

/// All correlators from a single adaptive pass; `Tᶻᶻ` is composed, not
/// integrated.
pub fn correlator_set(p: &ModelParams, spec: &QuadratureSpec) -> Result<CorrelatorSet> {
    let [g_plus, g_minus, s, mz] = integrate_all(p, spec)?;
    Ok(CorrelatorSet::compose(mz, g_minus, g_plus, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn dispersion_values() {
        assert!((dispersion(0.0, FRAC_PI_2, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(dispersion(1.0, 0.0, 0.5), 0.0);
        assert_eq!(dispersion(0.0, 0.0, 0.5), 1.0);
        assert!(dispersion(-1.0, PI, 0.5) < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.2, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 1.0, -0.1).is_err());
        assert!(ModelParams::new(0.5, f64::NAN, 0.1).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.0).is_ok());
        assert!(ModelParams::new(0.5, -3.0, 2.0).is_ok());
    }

    #[test]
    fn lag_from_int() {
        assert_eq!(Lag::try_from(1).unwrap(), Lag::Plus);
        assert_eq!(Lag::try_from(-1).unwrap(), Lag::Minus);
        assert!(Lag::try_from(2).is_err());
    }

    #[test]
    fn g_is_time_independent_without_field() {
        let p0 = ModelParams::new(0.5, 0.0, 0.0).unwrap();
        let g0 = correlator_g(Lag::Plus, &p0, &spec()).unwrap();
        let g5 = correlator_g(Lag::Plus, &p0.with_t(5.0), &spec()).unwrap();
        assert!((g0 - g5).abs() < 1e-12);
    }

    #[test]
    fn s_vanishes_at_zero_field_or_time() {
        for (a, t) in [(0.0, 3.0), (2.0, 0.0), (0.9, 0.0), (0.0, 0.0)] {
            let p = ModelParams::new(0.5, a, t).unwrap();
            assert!(correlator_s(&p, &spec()).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn magnetization_time_independent_without_field() {
        let p = ModelParams::new(0.5, 0.0, 0.0).unwrap();
        let m0 = magnetization_z(&p, &spec()).unwrap();
        let m7 = magnetization_z(&p.with_t(7.0), &spec()).unwrap();
        assert!((m0 - m7).abs() < 1e-12);
    }

    #[test]
    fn ising_zero_field_ground_state() {
        // gamma = 1, a = 0: antiferromagnetic x order, no z magnetization
        let p = ModelParams::new(1.0, 0.0, 0.0).unwrap();
        let cs = correlator_set(&p, &spec()).unwrap();
        assert!((cs.txx + 1.0).abs() < 1e-10);
        assert!(cs.tyy.abs() < 1e-10);
        assert!(cs.mz.abs() < 1e-10);
    }

    #[test]
    fn separate_integrals_match_shared_pass() {
        let p = ModelParams::new(0.5, 1.3, 2.2).unwrap();
        let cs = correlator_set(&p, &spec()).unwrap();
        let gm = correlator_g(Lag::Minus, &p, &spec()).unwrap();
        let gp = correlator_g(Lag::Plus, &p, &spec()).unwrap();
        let s = correlator_s(&p, &spec()).unwrap();
        let m = magnetization_z(&p, &spec()).unwrap();
        assert!((cs.txx - gm).abs() < 1e-10);
        assert!((cs.tyy - gp).abs() < 1e-10);
        assert!((cs.txy - s).abs() < 1e-10);
        assert!((cs.mz - m).abs() < 1e-10);
        assert!((cs.tzz - (m * m - gp * gm + s * s)).abs() < 1e-10);
    }

    #[test]
    fn invalid_params_rejected_by_integrals() {
        let bad = ModelParams {
            gamma: 0.5,
            a_tilde: 1.0,
            t_tilde: -1.0,
        };
        assert!(correlator_set(&bad, &spec()).is_err());
        assert!(magnetization_z(&bad, &spec()).is_err());
    }
}
