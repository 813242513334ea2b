//! Two-qubit and single-qubit density matrices.
//!
//! Matrices are stored in the product basis `{|00⟩, |01⟩, |10⟩, |11⟩}` with
//! qubit A first, so the row index of `|ab⟩` is `2a + b`.
//!
//! States built from a [`CorrelatorSet`] are X-shaped: only the diagonal and
//! the anti-diagonal are populated. Their spectrum splits into an outer block
//! `{ρ₀₀, ρ₃₃, ρ₀₃}` and an inner block `{ρ₁₁, ρ₂₂, ρ₁₂}` and is computed in
//! closed form. The flag is set by the constructor; matrices handed in
//! through [`TwoQubitState::from_matrix`] always take the generic Hermitian
//! eigensolver.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};

pub type Matrix4c = Matrix4<Complex64>;
pub type Matrix2c = Matrix2<Complex64>;

/// Eigenvalues below this are an error; between it and zero they are clamped.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-9;
const RENORMALIZE_DRIFT: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Which qubit an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Side {
    A,
    #[default]
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::InvalidParameter(format!("unknown side '{other}'"))),
        }
    }
}

/// Von Neumann entropy in bits of a spectrum.
///
/// Eigenvalues in `[-1e-9, 0)` are clamped to zero and the spectrum is
/// renormalized if its sum drifted by more than `1e-10`.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> Result<f64> {
    if let Some(&bad) = spectrum
        .iter()
        .find(|&&l| l < -NEGATIVE_EIGENVALUE_TOLERANCE || l.is_nan())
    {
        return Err(Error::InvalidSpectrum { eigenvalue: bad });
    }
    let clamped: Vec<f64> = spectrum.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let scale = if (total - 1.0).abs() > RENORMALIZE_DRIFT && total > 0.0 {
        1.0 / total
    } else {
        1.0
    };
    Ok(clamped
        .iter()
        .map(|&l| l * scale)
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Shannon entropy in bits; zero entries contribute nothing.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Eigenvalues of the 2×2 Hermitian block `[[d0, off], [off*, d1]]`, larger first.
fn hermitian_pair(d0: f64, d1: f64, off_norm: f64) -> [f64; 2] {
    let mean = 0.5 * (d0 + d1);
    let half_gap = 0.5 * (d0 - d1);
    let r = half_gap.hypot(off_norm);
    [mean + r, mean - r]
}

fn sort_descending(mut v: [f64; 4]) -> [f64; 4] {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn x_block_eigenvalues(m: &Matrix4c) -> [f64; 4] {
    let outer = hermitian_pair(m[(0, 0)].re, m[(3, 3)].re, m[(0, 3)].norm());
    let inner = hermitian_pair(m[(1, 1)].re, m[(2, 2)].re, m[(1, 2)].norm());
    sort_descending([outer[0], outer[1], inner[0], inner[1]])
}

fn hermitian_eigenvalues(m: &Matrix4c) -> [f64; 4] {
    let herm = (m + m.adjoint()) * c(0.5);
    let ev = herm.symmetric_eigenvalues();
    sort_descending([ev[0], ev[1], ev[2], ev[3]])
}

fn anti_diagonal_defect(m: &Matrix4c) -> f64 {
    let mut defect: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                defect = defect.max(m[(i, j)].norm());
            }
        }
    }
    defect
}

/// Single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    m: Matrix2c,
}

impl SingleQubitState {
    pub fn from_matrix(m: Matrix2c) -> Self {
        SingleQubitState { m }
    }

    pub fn maximally_mixed() -> Self {
        SingleQubitState {
            m: Matrix2c::identity() * c(0.5),
        }
    }

    /// Diagonal state `diag(p0, 1 − p0)`.
    pub fn diagonal(p0: f64) -> Self {
        SingleQubitState {
            m: Matrix2c::new(c(p0), ZERO, ZERO, c(1.0 - p0)),
        }
    }

    /// State with Bloch vector `(x, y, z)`, `|r| ≤ 1`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Self {
        SingleQubitState {
            m: Matrix2c::new(
                c(0.5 * (1.0 + z)),
                Complex64::new(0.5 * x, -0.5 * y),
                Complex64::new(0.5 * x, 0.5 * y),
                c(0.5 * (1.0 - z)),
            ),
        }
    }

    pub fn matrix(&self) -> &Matrix2c {
        &self.m
    }

    /// Eigenvalues, larger first.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_pair(self.m[(0, 0)].re, self.m[(1, 1)].re, self.m[(0, 1)].norm())
    }

    pub fn entropy(&self) -> Result<f64> {
        entropy_of_spectrum(&self.eigenvalues())
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }
}

/// Two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    m: Matrix4c,
    x_shaped: bool,
}

/// Defects reported by [`TwoQubitState::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Largest entry of `|ρ − ρ†|`.
    pub hermiticity_defect: f64,
    /// `|tr ρ − 1|`.
    pub trace_defect: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    /// Largest entry off the diagonal and anti-diagonal.
    pub x_shape_defect: f64,
}

impl Diagnostics {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.hermiticity_defect <= tol && self.trace_defect <= tol && self.min_eigenvalue >= -tol
    }
}

impl TwoQubitState {
    /// `¼[I⊗I + Mᶻ(σᶻ⊗I + I⊗σᶻ) + Tˣʸ(σˣ⊗σʸ + σʸ⊗σˣ) + Σⱼ Tʲʲ σʲ⊗σʲ]`.
    pub fn from_correlators(cs: &CorrelatorSet) -> Result<Self> {
        let q = 0.25;
        let mut m = Matrix4c::zeros();
        m[(0, 0)] = c(q * (1.0 + 2.0 * cs.mz + cs.tzz));
        m[(1, 1)] = c(q * (1.0 - cs.tzz));
        m[(2, 2)] = c(q * (1.0 - cs.tzz));
        m[(3, 3)] = c(q * (1.0 - 2.0 * cs.mz + cs.tzz));
        let corner = Complex64::new(q * (cs.txx - cs.tyy), -2.0 * q * cs.txy);
        m[(0, 3)] = corner;
        m[(3, 0)] = corner.conj();
        m[(1, 2)] = c(q * (cs.txx + cs.tyy));
        m[(2, 1)] = m[(1, 2)];
        let state = TwoQubitState { m, x_shaped: true };
        let min = state.eigenvalues()[3];
        if min < -NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(state)
    }

    /// Wraps an arbitrary matrix. No checks are made; use [`validate`](Self::validate).
    pub fn from_matrix(m: Matrix4c) -> Self {
        TwoQubitState { m, x_shaped: false }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) amplitude vector.
    pub fn from_pure(psi: [Complex64; 4]) -> Self {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let mut m = Matrix4c::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = psi[i] * psi[j].conj() / norm;
            }
        }
        Self::from_matrix(m)
    }

    pub fn product(a: &SingleQubitState, b: &SingleQubitState) -> Self {
        Self::from_matrix(a.m.kronecker(&b.m))
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitState {
            m: Matrix4c::identity() * c(0.25),
            x_shaped: true,
        }
    }

    pub fn diagonal(p: [f64; 4]) -> Self {
        TwoQubitState {
            m: Matrix4c::from_diagonal(&nalgebra::Vector4::from(p.map(c))),
            x_shaped: true,
        }
    }

    /// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn bell_phi_plus() -> Self {
        let mut m = Matrix4c::zeros();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = c(0.5);
        }
        TwoQubitState { m, x_shaped: true }
    }

    /// `p|Φ⁺⟩⟨Φ⁺| + (1 − p) I/4`.
    pub fn werner(p: f64) -> Self {
        let bell = Self::bell_phi_plus();
        let mixed = Self::maximally_mixed();
        TwoQubitState {
            m: bell.m * c(p) + mixed.m * c(1.0 - p),
            x_shaped: true,
        }
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    pub fn is_x_shaped(&self) -> bool {
        self.x_shaped
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        if self.x_shaped {
            x_block_eigenvalues(&self.m)
        } else {
            hermitian_eigenvalues(&self.m)
        }
    }

    /// Eigenvalues from the generic Hermitian solver regardless of shape.
    pub fn eigenvalues_generic(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.m)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        entropy_of_spectrum(&self.eigenvalues())
    }

    /// Partial trace over the other qubit, keeping `keep`.
    pub fn reduced(&self, keep: Side) -> SingleQubitState {
        let mut r = Matrix2c::zeros();
        for i in 0..2 {
            for j in 0..2 {
                r[(i, j)] = match keep {
                    Side::A => (0..2).map(|k| self.m[(2 * i + k, 2 * j + k)]).sum(),
                    Side::B => (0..2).map(|k| self.m[(2 * k + i, 2 * k + j)]).sum(),
                };
            }
        }
        SingleQubitState { m: r }
    }

    /// Transposes the indices of `side`.
    pub fn partial_transpose(&self, side: Side) -> PartialTranspose {
        let mut out = Matrix4c::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        let v = self.m[(2 * a + b, 2 * a2 + b2)];
                        let (r, col) = match side {
                            Side::A => (2 * a2 + b, 2 * a + b2),
                            Side::B => (2 * a + b2, 2 * a2 + b),
                        };
                        out[(r, col)] = v;
                    }
                }
            }
        }
        PartialTranspose {
            m: out,
            x_shaped: self.x_shaped,
        }
    }

    pub fn validate(&self) -> Diagnostics {
        let diff = self.m - self.m.adjoint();
        let hermiticity_defect = diff.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Diagnostics {
            hermiticity_defect,
            trace_defect: (self.m.trace() - c(1.0)).norm(),
            min_eigenvalue: hermitian_eigenvalues(&self.m)[3],
            x_shape_defect: anti_diagonal_defect(&self.m),
        }
    }
}

/// Partial transpose of a two-qubit state. Hermitian with unit trace but not
/// necessarily positive, so it is kept apart from [`TwoQubitState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialTranspose {
    m: Matrix4c,
    x_shaped: bool,
}

impl PartialTranspose {
    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        if self.x_shaped {
            x_block_eigenvalues(&self.m)
        } else {
            hermitian_eigenvalues(&self.m)
        }
    }

    pub fn eigenvalues_generic(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[3]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn zero_correlators_give_maximally_mixed() {
        let s = TwoQubitState::from_correlators(&CorrelatorSet::default()).unwrap();
        assert_eq!(s.matrix(), TwoQubitState::maximally_mixed().matrix());
    }

    #[test]
    fn polarized_correlators_give_up_up() {
        let cs = CorrelatorSet {
            mz: 1.0,
            tzz: 1.0,
            ..Default::default()
        };
        let s = TwoQubitState::from_correlators(&cs).unwrap();
        let mut expected = Matrix4c::zeros();
        expected[(0, 0)] = c(1.0);
        assert_eq!(*s.matrix(), expected);
    }

    #[test]
    fn bell_correlators_give_bell_projector() {
        let cs = CorrelatorSet {
            txx: 1.0,
            tyy: -1.0,
            tzz: 1.0,
            ..Default::default()
        };
        let s = TwoQubitState::from_correlators(&cs).unwrap();
        assert_eq!(s.matrix(), TwoQubitState::bell_phi_plus().matrix());
    }

    #[test]
    fn txy_enters_corner_imaginary_part() {
        let cs = CorrelatorSet {
            txy: 0.2,
            ..Default::default()
        };
        let s = TwoQubitState::from_correlators(&cs).unwrap();
        assert_eq!(s.matrix()[(0, 3)], Complex64::new(0.0, -0.1));
        assert_eq!(s.matrix()[(1, 2)], ZERO);
    }

    #[test]
    fn rejects_non_positive_correlators() {
        let cs = CorrelatorSet {
            txx: 1.0,
            tyy: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            TwoQubitState::from_correlators(&cs),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn spectra_of_reference_states() {
        assert!(close(
            &TwoQubitState::maximally_mixed().eigenvalues(),
            &[0.25; 4],
            1e-15
        ));
        assert!(close(
            &TwoQubitState::bell_phi_plus().eigenvalues(),
            &[1.0, 0.0, 0.0, 0.0],
            1e-15
        ));
    }

    #[test]
    fn entropies() {
        assert!(TwoQubitState::bell_phi_plus().entropy().unwrap().abs() < 1e-12);
        assert!((TwoQubitState::maximally_mixed().entropy().unwrap() - 2.0).abs() < 1e-12);
        let half = TwoQubitState::diagonal([0.5, 0.5, 0.0, 0.0]);
        assert!((half.entropy().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_clamps_small_negatives_and_rejects_large_ones() {
        let s = entropy_of_spectrum(&[1.0 + 5e-10, -5e-10, 0.0, 0.0]).unwrap();
        assert!(s.abs() < 1e-8);
        assert!(matches!(
            entropy_of_spectrum(&[1.1, -0.1]),
            Err(Error::InvalidSpectrum { .. })
        ));
    }

    #[test]
    fn reductions() {
        let bell = TwoQubitState::bell_phi_plus();
        for side in [Side::A, Side::B] {
            let r = bell.reduced(side);
            assert_eq!(*r.matrix(), *SingleQubitState::maximally_mixed().matrix());
        }
        let up = TwoQubitState::diagonal([1.0, 0.0, 0.0, 0.0]);
        for side in [Side::A, Side::B] {
            assert_eq!(up.reduced(side).eigenvalues(), [1.0, 0.0]);
            assert_eq!(up.reduced(side).matrix()[(0, 0)], c(1.0));
        }
    }

    #[test]
    fn product_reduces_to_factors() {
        let a = SingleQubitState::from_bloch(0.3, -0.2, 0.5);
        let b = SingleQubitState::from_bloch(-0.1, 0.6, 0.1);
        let s = TwoQubitState::product(&a, &b);
        assert!((s.reduced(Side::A).matrix() - a.matrix()).norm() < 1e-15);
        assert!((s.reduced(Side::B).matrix() - b.matrix()).norm() < 1e-15);
    }

    #[test]
    fn correlator_state_has_diagonal_reductions() {
        let cs = CorrelatorSet::compose(0.3, -0.2, 0.1, 0.05);
        let s = TwoQubitState::from_correlators(&cs).unwrap();
        let ra = s.reduced(Side::A);
        let rb = s.reduced(Side::B);
        assert_eq!(ra, rb);
        assert!((ra.matrix()[(0, 0)].re - 0.65).abs() < 1e-15);
        assert!((ra.matrix()[(1, 1)].re - 0.35).abs() < 1e-15);
        assert_eq!(ra.matrix()[(0, 1)], ZERO);
    }

    #[test]
    fn bell_partial_transpose_has_negative_half() {
        let pt = TwoQubitState::bell_phi_plus().partial_transpose(Side::A);
        assert!((pt.min_eigenvalue() + 0.5).abs() < 1e-15);
        assert!((pt.eigenvalues_generic()[3] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_partial_transpose_stays_positive() {
        let a = SingleQubitState::from_bloch(0.3, -0.4, 0.5);
        let b = SingleQubitState::from_bloch(0.0, 0.6, -0.7);
        let pt = TwoQubitState::product(&a, &b).partial_transpose(Side::A);
        assert!(pt.min_eigenvalue() > -1e-14);
    }

    #[test]
    fn x_partial_transpose_swaps_anti_diagonals() {
        let cs = CorrelatorSet::compose(0.2, -0.3, 0.1, 0.15);
        let s = TwoQubitState::from_correlators(&cs).unwrap();
        let pt = s.partial_transpose(Side::A);
        assert_eq!(pt.matrix()[(1, 2)], s.matrix()[(0, 3)].conj());
        assert_eq!(pt.matrix()[(0, 3)], s.matrix()[(1, 2)]);
        let ptb = s.partial_transpose(Side::B);
        assert_eq!(ptb.matrix()[(1, 2)], s.matrix()[(0, 3)]);
    }

    #[test]
    fn validate_reference_and_perturbed() {
        let d = TwoQubitState::maximally_mixed().validate();
        assert_eq!(d.hermiticity_defect, 0.0);
        assert_eq!(d.trace_defect, 0.0);
        assert_eq!(d.x_shape_defect, 0.0);
        assert!((d.min_eigenvalue - 0.25).abs() < 1e-15);

        let eps = 1e-3;
        let mut m = *TwoQubitState::maximally_mixed().matrix();
        m[(0, 1)] += c(eps);
        let d = TwoQubitState::from_matrix(m).validate();
        assert!((d.hermiticity_defect - eps).abs() < 1e-15);
        assert!((d.x_shape_defect - eps).abs() < 1e-15);
    }

    #[test]
    fn side_parsing() {
        assert_eq!("A".parse::<Side>().unwrap(), Side::A);
        assert_eq!("b".parse::<Side>().unwrap(), Side::B);
        assert!("C".parse::<Side>().is_err());
        assert_eq!(Side::A.other(), Side::B);
    }
}
